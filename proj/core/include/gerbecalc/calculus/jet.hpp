#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace gerbecalc::calculus {

using Complex = std::complex<double>;

// Thread-local free lists per element count. Jet coefficient buffers are
// short-lived and of a handful of sizes.
template <class T>
struct PoolAllocator {
  using value_type = T;
  static constexpr std::size_t kMaxPooled = 512;

  PoolAllocator() = default;
  template <class U>
  PoolAllocator(const PoolAllocator<U>&) {}

  T* allocate(std::size_t n) {
    if (n <= kMaxPooled) {
      auto& list = lists()[n];
      if (!list.empty()) {
        T* p = list.back();
        list.pop_back();
        return p;
      }
    }
    return std::allocator<T>{}.allocate(n);
  }
  void deallocate(T* p, std::size_t n) {
    if (n <= kMaxPooled) {
      lists()[n].push_back(p);
      return;
    }
    std::allocator<T>{}.deallocate(p, n);
  }
  template <class U>
  bool operator==(const PoolAllocator<U>&) const { return true; }

 private:
  // Never destroyed, so buffers released during static destruction stay valid.
  static std::array<std::vector<T*>, kMaxPooled + 1>& lists() {
    thread_local auto* l = new std::array<std::vector<T*>, kMaxPooled + 1>();
    return *l;
  }
};

using CoeffVector = std::vector<Complex, PoolAllocator<Complex>>;

inline constexpr int kMaxAxes = 8;

// Graded enumeration of monomials in `nvars` variables of total degree at most
// `order`. Tables of lower order are prefixes of higher-order tables.
class MonomialTable {
 public:
  using Exponents = std::array<std::uint8_t, kMaxAxes>;
  struct Product {
    int a, b, c;
  };
  struct Derivative {
    int src, dst;
    double factor;
  };

  static const MonomialTable& get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exps_.size()); }
  int size_up_to(int degree) const { return prefix_[degree]; }
  const Exponents& exponents(int idx) const { return exps_[idx]; }
  int index_of(const Exponents& e) const;

  const std::vector<Product>& products() const { return products_; }
  // Coefficient map of d/dx_axis into the table of order-1.
  const std::vector<Derivative>& derivative(int axis) const { return derivs_[axis]; }

 private:
  MonomialTable(int nvars, int order);

  int nvars_, order_;
  std::vector<Exponents> exps_;
  std::vector<int> prefix_;
  std::vector<Product> products_;
  std::vector<std::vector<Derivative>> derivs_;
};

// Truncated multivariate Taylor polynomial about an evaluation point. The
// coefficient of monomial x^a is (d^a f)/a!.
class Jet {
 public:
  Jet() = default;
  Jet(int nvars, int order);
  static Jet constant(Complex c, int nvars, int order);
  static Jet variable(double value, int axis, int nvars, int order);

  int nvars() const { return table_->nvars(); }
  int order() const { return table_->order(); }
  const MonomialTable& table() const { return *table_; }
  bool valid() const { return table_ != nullptr; }

  Complex value() const { return c_[0]; }
  Complex partial(int axis) const;
  Complex second(int a, int b) const;
  Complex coeff(int idx) const { return c_[idx]; }
  Complex& coeff(int idx) { return c_[idx]; }
  const CoeffVector& coeffs() const { return c_; }

  // Largest |coefficient|; with `value_only` only the constant term.
  double max_abs(bool value_only = false) const;

  Jet truncated(int order) const;
  Jet derivative(int axis) const;
  // Keeps the first `keep` variables; monomials involving later ones are dropped.
  Jet restricted(int keep) const;
  Jet conj() const;
  Jet reciprocal() const;
  // Composition f(g) from the Taylor coefficients f^(k)(g0)/k!, k=0..order.
  Jet compose(const std::vector<Complex>& taylor) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(Complex s);
  Jet& operator+=(Complex s) {
    c_[0] += s;
    return *this;
  }
  Jet operator-() const;

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, Complex s) { return a *= s; }
  friend Jet operator*(Complex s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, Complex s) { return a += s; }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }

 private:
  explicit Jet(const MonomialTable* t) : table_(t), c_(t->size()) {}
  void match_order(const Jet& o);

  const MonomialTable* table_ = nullptr;
  CoeffVector c_;
};

// Elementary functions of a jet by Taylor composition.
Jet jet_exp(const Jet& g);
Jet jet_sin(const Jet& g);
Jet jet_cos(const Jet& g);

}  // namespace gerbecalc::calculus
