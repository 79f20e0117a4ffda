#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gerbecalc::cli {

// One manifest line after tokenization. `words` are positional tokens after
// the `=` (or after the keyword for lines without one); `options` are
// key=value tokens, quotes removed.
struct Statement {
  int line = 0;
  std::string keyword;  // gerbe, twist1, bundle, connection, path, form, check
  std::string id;       // declared name; check name for `check`
  std::string on;       // `on <id>` for bundles and connections
  std::vector<std::string> words;
  std::map<std::string, std::string> options;
};

struct Tolerances {
  double pointwise = 1e-8;
  double closed = 1e-7;
  double quadrature = 1e-6;
  double double_quadrature = 1e-5;
};

struct Manifest {
  std::string scenario;
  int dim = 2;
  int grid = 3;
  double margin = 0.05;
  int samples = 200;
  std::uint64_t seed = 1;
  Tolerances tol;
  std::vector<Statement> objects;  // declarations in file order
  std::vector<Statement> checks;

  const Statement* find(const std::string& id) const;
};

// Syntax, reference and duplicate errors throw ManifestError naming the line.
class ManifestError : public std::runtime_error {
 public:
  ManifestError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

Manifest parse_manifest(const std::string& text);
Manifest load_manifest(const std::string& path);
// Canonical text; parse_manifest(print_manifest(m)) prints identically.
std::string print_manifest(const Manifest& m);

const std::vector<std::string>& check_names();

}  // namespace gerbecalc::cli
