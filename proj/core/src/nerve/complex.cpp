#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "gerbecalc/error.hpp"
#include "gerbecalc/nerve/nerve.hpp"

namespace gerbecalc::nerve {

AbstractComplex AbstractComplex::from_simplices(const std::vector<Simplex>& top) {
  std::vector<std::set<Simplex>> by_dim;
  int vertices = 0;
  for (Simplex s : top) {
    if (s.empty()) continue;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw PreconditionError("repeated vertex in simplex");
    if (s.front() < 0) throw PreconditionError("negative vertex index");
    vertices = std::max(vertices, s.back() + 1);
    const int n = static_cast<int>(s.size());
    if (static_cast<int>(by_dim.size()) < n) by_dim.resize(n);
    // Every nonempty subset is a face.
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      Simplex f;
      for (int k = 0; k < n; ++k)
        if (mask & (1u << k)) f.push_back(s[k]);
      by_dim[f.size() - 1].insert(f);
    }
  }
  AbstractComplex k;
  k.vertices_ = vertices;
  for (const auto& layer : by_dim) {
    k.simplices_.emplace_back(layer.begin(), layer.end());
    for (std::size_t i = 0; i < layer.size(); ++i) k.index_[k.simplices_.back()[i]] = static_cast<int>(i);
  }
  return k;
}

AbstractComplex AbstractComplex::from_cover(const cover::Cover& c) {
  AbstractComplex k;
  k.vertices_ = c.chart_count();
  for (int q = 0; q <= cover::kMaxSimplexDim; ++q) {
    const auto& s = c.simplices(q);
    if (s.empty()) break;
    k.simplices_.push_back(s);
    for (std::size_t i = 0; i < s.size(); ++i) k.index_[s[i]] = static_cast<int>(i);
  }
  return k;
}

AbstractComplex AbstractComplex::circle() { return from_simplices({{0, 1}, {1, 2}, {0, 2}}); }

AbstractComplex AbstractComplex::rp2() {
  // Minimal 6-vertex triangulation (antipodal quotient of the icosahedron).
  const std::vector<Simplex> t{{1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}, {1, 2, 6},
                               {2, 3, 5}, {2, 4, 5}, {2, 4, 6}, {3, 4, 6}, {3, 5, 6}};
  std::vector<Simplex> z;
  for (const auto& s : t) z.push_back({s[0] - 1, s[1] - 1, s[2] - 1});
  return from_simplices(z);
}

AbstractComplex AbstractComplex::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Simplex> top;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t here = offset;
    offset += line.size() + 1;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    Simplex s;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        throw ParseError("bad vertex index '" + tok + "'", here);
      }
      if (used != tok.size() || v < 0) throw ParseError("bad vertex index '" + tok + "'", here);
      s.push_back(v);
    }
    if (!s.empty()) top.push_back(s);
  }
  return from_simplices(top);
}

AbstractComplex AbstractComplex::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PreconditionError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

const std::vector<Simplex>& AbstractComplex::simplices(int q) const {
  static const std::vector<Simplex> empty;
  if (q < 0 || q >= static_cast<int>(simplices_.size())) return empty;
  return simplices_[q];
}

int AbstractComplex::index(const Simplex& s) const {
  const auto it = index_.find(s);
  return it == index_.end() ? -1 : it->second;
}

IntMatrix coboundary_matrix(const AbstractComplex& k, int q) {
  const auto& rows = k.simplices(q + 1);
  const auto& cols = k.simplices(q);
  IntMatrix m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Simplex& s = rows[r];
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex f;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != drop) f.push_back(s[j]);
      m(static_cast<int>(r), k.index(f)) += drop % 2 == 0 ? 1 : -1;
    }
  }
  return m;
}

IntCochain coboundary(const AbstractComplex& k, const IntCochain& c) {
  if (c.values.size() != k.simplices(c.q).size()) throw PreconditionError("cochain size mismatch");
  const IntMatrix m = coboundary_matrix(k, c.q);
  IntCochain out{c.q + 1, std::vector<std::int64_t>(m.rows, 0)};
  for (int r = 0; r < m.rows; ++r)
    for (int j = 0; j < m.cols; ++j) out.values[r] += m(r, j) * c.values[j];
  return out;
}

}  // namespace gerbecalc::nerve
