#include "gerbecalc/cli/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace gerbecalc::cli {

namespace {

Statement statement(int line, const std::string& keyword, const std::string& id = {}) {
  Statement s;
  s.line = line;
  s.keyword = keyword;
  s.id = id;
  return s;
}

struct Token {
  std::string text;
  bool quoted = false;
};

std::vector<Token> tokenize(const std::string& line, int lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    Token t;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
      if (line[i] == '"') {
        const std::size_t end = line.find('"', i + 1);
        if (end == std::string::npos) throw ManifestError(lineno, "unterminated string");
        t.text += line.substr(i + 1, end - i - 1);
        t.quoted = true;
        i = end + 1;
      } else {
        t.text += line[i++];
      }
    }
    out.push_back(t);
  }
  return out;
}

bool is_option(const Token& t, std::string* key, std::string* value) {
  if (t.quoted && t.text.find('=') == std::string::npos) return false;
  const auto eq = t.text.find('=');
  if (eq == std::string::npos || eq == 0) return false;
  *key = t.text.substr(0, eq);
  *value = t.text.substr(eq + 1);
  return std::all_of(key->begin(), key->end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

double to_double(const std::string& s, int line, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ManifestError(line, "bad number for " + what + ": '" + s + "'");
}

long long to_int(const std::string& s, int line, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ManifestError(line, "bad integer for " + what + ": '" + s + "'");
}

void split_options(const std::vector<Token>& toks, std::size_t from, Statement* st) {
  for (std::size_t k = from; k < toks.size(); ++k) {
    std::string key, value;
    if (is_option(toks[k], &key, &value)) {
      if (st->options.count(key)) throw ManifestError(st->line, "repeated option '" + key + "'");
      st->options[key] = value;
    } else {
      st->words.push_back(toks[k].text);
    }
  }
}

// Variant name -> (positional reference kinds, required options, optional options).
struct Shape {
  std::vector<std::string> refs;  // "gerbe", "twist1", ..., or "by" for the literal keyword
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

const std::map<std::string, std::map<std::string, Shape>>& declaration_shapes() {
  static const std::map<std::string, std::map<std::string, Shape>> s{
      {"gerbe",
       {{"trivial", {}},
        {"coboundary", {{}, {"seed"}, {"beta"}}},
        {"twist", {{"gerbe", "by", "twist1"}, {}, {}}},
        {"shiftxi", {{"gerbe"}, {"xi"}, {}}},
        {"perturbB", {{"gerbe"}, {"chart", "form"}, {}}},
        {"conjugate", {{"gerbe"}, {}, {}}}}},
      {"twist1", {{"random", {{}, {"seed"}, {"amp"}}}, {"identity", {}}}},
      {"bundle",
       {{"trivial", {{}, {"rank"}, {}}},
        {"line", {{}, {"k"}, {}}},
        {"sum", {{"bundle", "bundle"}, {}, {}}},
        {"gauge", {{"bundle"}, {"seed"}, {}}},
        {"transport", {{"bundle", "by", "twist1"}, {}, {}}}}},
      {"connection",
       {{"standard", {}},
        {"perturb", {{"connection"}, {"seed", "amp"}, {}}},
        {"transport", {{"connection", "by", "twist1"}, {}, {}}},
        {"shiftxi", {{"connection"}, {"xi"}, {}}}}},
      {"path",
       {{"affine", {{"connection", "connection"}, {}, {}}},
        {"eased", {{"connection", "connection"}, {}, {}}},
        {"detour", {{"connection", "connection"}, {"seed", "amp"}, {}}},
        {"gaugepath", {{"connection"}, {"phi_seed"}, {}}}}},
  };
  return s;
}

// Positional kinds for checks; a trailing '?' marks an optional argument.
const std::map<std::string, Shape>& check_shapes() {
  static const std::map<std::string, Shape> s{
      {"validate_gerbe", {{"gerbe"}, {}, {}}},
      {"validate_bundle", {{"bundle"}, {}, {}}},
      {"validate_connection", {{"connection|path"}, {}, {}}},
      {"ch_closed", {{"connection"}, {}, {}}},
      {"ch_glue", {{"connection"}, {}, {}}},
      {"ch_additive", {{"connection", "connection"}, {}, {}}},
      {"ch_rescale", {{"connection"}, {"xi"}, {}}},
      {"transgression", {{"path"}, {}, {"coarse"}}},
      {"bigon", {{"path", "path"}, {}, {}}},
      {"cs_gauge", {{"path"}, {"phi_seed"}, {}}},
      {"odd_chern_winding", {{}, {}, {"xi"}}},
      {"stokes_fiber", {{"form"}, {}, {}}},
      {"hexagon", {{"connection", "connection", "connection?"}, {"omega", "eta", "theta", "seed"}, {"defect"}}},
      {"certificate", {{"connection"}, {"kind", "omega"}, {"seed"}}},
      {"dd_class", {{"gerbe"}, {"expect"}, {"twist"}}},
      {"cohomology", {{"complex"}, {"q", "betti"}, {"torsion", "generator_order"}}},
      {"chern_number", {{"connection"}, {"k"}, {"refine", "translate"}}},
      {"twist_compat", {{"connection", "connection"}, {"twist", "xi", "omega", "eta", "theta"}, {}}},
  };
  return s;
}

bool kind_matches(const std::string& want, const std::string& have) {
  std::stringstream ss(want);
  std::string alt;
  while (std::getline(ss, alt, '|'))
    if (alt == have) return true;
  return false;
}

void check_options(const Statement& st, const Shape& shape, const std::string& what) {
  for (const auto& r : shape.required)
    if (!st.options.count(r)) throw ManifestError(st.line, what + ": missing option '" + r + "'");
  for (const auto& [k, v] : st.options) {
    const bool known = std::count(shape.required.begin(), shape.required.end(), k) ||
                       std::count(shape.optional.begin(), shape.optional.end(), k);
    if (!known) throw ManifestError(st.line, what + ": unknown option '" + k + "'");
  }
}

void check_refs(const Statement& st, const std::vector<std::string>& words, const std::vector<std::string>& refs,
                const std::map<std::string, std::string>& kinds, const std::string& what) {
  std::size_t needed = 0;
  for (const auto& r : refs)
    if (r.empty() || r.back() != '?') ++needed;
  if (words.size() < needed || words.size() > refs.size())
    throw ManifestError(st.line, what + ": expected " + std::to_string(refs.size()) + " arguments");
  for (std::size_t k = 0; k < words.size(); ++k) {
    std::string want = refs[k];
    if (!want.empty() && want.back() == '?') want.pop_back();
    if (want == "by") {
      if (words[k] != "by") throw ManifestError(st.line, what + ": expected 'by'");
      continue;
    }
    if (want == "complex") continue;
    const auto it = kinds.find(words[k]);
    if (it == kinds.end()) throw ManifestError(st.line, what + ": unresolved reference '" + words[k] + "'");
    if (!kind_matches(want, it->second))
      throw ManifestError(st.line, what + ": '" + words[k] + "' is a " + it->second + ", expected " + want);
  }
}

std::string quote_if_needed(const std::string& v) {
  const bool plain = !v.empty() && std::all_of(v.begin(), v.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == ',' || c == '-' || c == '+' ||
           c == ':' || c == '/';
  });
  return plain ? v : "\"" + v + "\"";
}

std::string format_double(double v) {
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "validate_gerbe", "validate_bundle", "validate_connection", "ch_closed",   "ch_glue",
      "ch_additive",    "ch_rescale",      "transgression",       "bigon",       "cs_gauge",
      "odd_chern_winding", "stokes_fiber", "hexagon",             "certificate", "dd_class",
      "cohomology",     "chern_number",    "twist_compat"};
  return names;
}

const Statement* Manifest::find(const std::string& id) const {
  for (const auto& s : objects)
    if (s.id == id) return &s;
  return nullptr;
}

Manifest parse_manifest(const std::string& text) {
  Manifest m;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::map<std::string, std::string> kinds;  // id -> declaration keyword
  bool have_manifold = false;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::vector<Token> toks = tokenize(raw, lineno);
    if (toks.empty()) continue;
    const std::string& kw = toks[0].text;
    if (kw == "scenario") {
      if (toks.size() != 2) throw ManifestError(lineno, "scenario takes one name");
      m.scenario = toks[1].text;
    } else if (kw == "manifold") {
      if (toks.size() < 2 || toks[1].text != "torus") throw ManifestError(lineno, "only 'manifold torus' is supported");
      Statement st = statement(lineno, kw);
      split_options(toks, 2, &st);
      if (!st.words.empty()) throw ManifestError(lineno, "manifold: unexpected '" + st.words[0] + "'");
      check_options(st, Shape{{}, {"dim"}, {"grid", "margin"}}, "manifold");
      m.dim = static_cast<int>(to_int(st.options["dim"], lineno, "dim"));
      if (m.dim < 1 || m.dim > 3) throw ManifestError(lineno, "dim must be 1, 2 or 3");
      if (st.options.count("grid")) m.grid = static_cast<int>(to_int(st.options["grid"], lineno, "grid"));
      if (st.options.count("margin")) m.margin = to_double(st.options["margin"], lineno, "margin");
      if (m.grid < 3) throw ManifestError(lineno, "grid must be at least 3");
      have_manifold = true;
    } else if (kw == "samples") {
      Statement st = statement(lineno, kw);
      split_options(toks, 1, &st);
      check_options(st, Shape{{}, {}, {"count", "seed"}}, "samples");
      if (!st.words.empty()) throw ManifestError(lineno, "samples: unexpected '" + st.words[0] + "'");
      if (st.options.count("count")) m.samples = static_cast<int>(to_int(st.options["count"], lineno, "count"));
      if (st.options.count("seed")) m.seed = static_cast<std::uint64_t>(to_int(st.options["seed"], lineno, "seed"));
      if (m.samples < 1) throw ManifestError(lineno, "samples count must be positive");
    } else if (kw == "tolerance") {
      Statement st = statement(lineno, kw);
      split_options(toks, 1, &st);
      check_options(st, Shape{{}, {}, {"pointwise", "quadrature", "double_quadrature", "closed"}}, "tolerance");
      if (!st.words.empty()) throw ManifestError(lineno, "tolerance: unexpected '" + st.words[0] + "'");
      for (const auto& [k, v] : st.options) {
        const double x = to_double(v, lineno, k);
        if (k == "pointwise") m.tol.pointwise = x;
        if (k == "quadrature") m.tol.quadrature = x;
        if (k == "double_quadrature") m.tol.double_quadrature = x;
        if (k == "closed") m.tol.closed = x;
      }
    } else if (kw == "check") {
      if (toks.size() < 2) throw ManifestError(lineno, "check needs a name");
      Statement st = statement(lineno, kw, toks[1].text);
      const auto shape = check_shapes().find(st.id);
      if (shape == check_shapes().end()) throw ManifestError(lineno, "unknown check '" + st.id + "'");
      split_options(toks, 2, &st);
      check_options(st, shape->second, st.id);
      check_refs(st, st.words, shape->second.refs, kinds, st.id);
      m.checks.push_back(st);
    } else if (declaration_shapes().count(kw) || kw == "form") {
      if (toks.size() < 3) throw ManifestError(lineno, kw + ": incomplete declaration");
      Statement st = statement(lineno, kw, toks[1].text);
      if (st.id.find('=') != std::string::npos || toks[1].quoted) throw ManifestError(lineno, "bad identifier");
      std::size_t k = 2;
      if (kw == "bundle" || kw == "connection") {
        if (k + 1 >= toks.size() || toks[k].text != "on") throw ManifestError(lineno, kw + ": expected 'on <id>'");
        st.on = toks[k + 1].text;
        const std::string want = kw == "bundle" ? "gerbe" : "bundle";
        const auto it = kinds.find(st.on);
        if (it == kinds.end() || it->second != want)
          throw ManifestError(lineno, kw + ": '" + st.on + "' is not a declared " + want);
        k += 2;
      }
      Statement pre = statement(lineno, kw);
      while (k < toks.size() && toks[k].text != "=") {
        std::string key, value;
        if (!is_option(toks[k], &key, &value)) throw ManifestError(lineno, kw + ": expected '='");
        pre.options[key] = value;
        ++k;
      }
      if (k >= toks.size()) throw ManifestError(lineno, kw + ": expected '='");
      ++k;
      if (kinds.count(st.id)) throw ManifestError(lineno, "duplicate name '" + st.id + "'");
      if (kw == "form") {
        if (k + 1 != toks.size()) throw ManifestError(lineno, "form: expected one quoted expression");
        st.words.push_back(toks[k].text);
        st.options = pre.options;
        check_options(st, Shape{{}, {"deg"}, {}}, "form");
        to_int(st.options["deg"], lineno, "deg");
      } else {
        if (!pre.options.empty()) throw ManifestError(lineno, kw + ": options belong after '='");
        split_options(toks, k, &st);
        if (st.words.empty()) throw ManifestError(lineno, kw + ": missing variant");
        const auto& variants = declaration_shapes().at(kw);
        const auto v = variants.find(st.words[0]);
        if (v == variants.end()) throw ManifestError(lineno, kw + ": unknown variant '" + st.words[0] + "'");
        check_options(st, v->second, kw + " " + st.words[0]);
        const std::vector<std::string> rest(st.words.begin() + 1, st.words.end());
        check_refs(st, rest, v->second.refs, kinds, kw + " " + st.words[0]);
      }
      kinds[st.id] = kw;
      m.objects.push_back(st);
    } else {
      throw ManifestError(lineno, "unknown statement '" + kw + "'");
    }
  }
  if (!have_manifold && !(m.objects.empty() && m.checks.empty())) {
    for (const auto& c : m.checks)
      if (c.id != "cohomology") throw ManifestError(c.line, "manifest has no manifold line");
    if (!m.objects.empty()) throw ManifestError(m.objects.front().line, "manifest has no manifold line");
  }
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ManifestError(0, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_manifest(ss.str());
}

std::string print_manifest(const Manifest& m) {
  std::ostringstream o;
  o << "scenario \"" << m.scenario << "\"\n";
  o << "manifold torus dim=" << m.dim << " grid=" << m.grid << " margin=" << format_double(m.margin) << "\n";
  o << "samples count=" << m.samples << " seed=" << m.seed << "\n";
  o << "tolerance pointwise=" << format_double(m.tol.pointwise) << " quadrature=" << format_double(m.tol.quadrature)
    << " double_quadrature=" << format_double(m.tol.double_quadrature) << " closed=" << format_double(m.tol.closed)
    << "\n";
  auto options = [&](const Statement& s) {
    for (const auto& [k, v] : s.options) o << " " << k << "=" << quote_if_needed(v);
  };
  for (const auto& s : m.objects) {
    o << s.keyword << " " << s.id;
    if (!s.on.empty()) o << " on " << s.on;
    if (s.keyword == "form") {
      options(s);
      o << " = \"" << s.words.at(0) << "\"\n";
      continue;
    }
    o << " =";
    for (const auto& w : s.words) o << " " << w;
    options(s);
    o << "\n";
  }
  for (const auto& s : m.checks) {
    o << "check " << s.id;
    for (const auto& w : s.words) o << " " << quote_if_needed(w);
    options(s);
    o << "\n";
  }
  return o.str();
}

}  // namespace gerbecalc::cli
