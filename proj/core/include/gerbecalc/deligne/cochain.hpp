#pragma once

#include "gerbecalc/deligne/gerbe.hpp"

namespace gerbecalc::deligne {

// Cech p-cochain of scalar q-forms, stored on sorted simplices.
struct FormCochain {
  int p = 0;
  int q = 0;
  FormCochainFn value;

  // Value on an arbitrary ordered tuple: alternating, zero on repeats.
  FormJet at(const std::vector<int>& tuple, const EvalPoint& p) const;
};

// (delta c)(v0..v_{p+1}) = sum_k (-1)^k c(v0..^vk..v_{p+1}); (delta f)_{ji} = f_j - f_i.
FormCochain delta(const FormCochain& c);
FormCochain exterior_d(const FormCochain& c);
FormCochain operator+(const FormCochain& a, const FormCochain& b);

// Element of the total complex of fixed total degree, one component per p.
using TotalCochain = std::vector<FormCochain>;
// D = d + (-1)^q delta, components grouped by Cech degree.
TotalCochain total_D(const TotalCochain& c);

// Random p-cochain of q-forms with trigonometric coefficients.
FormCochain random_cochain(int p, int q, int dim, std::uint64_t seed);

// Multiplicative coboundary of a U(1) 1-cochain on a sorted 2-simplex:
// (delta chi)_{v2 v1 v0} = chi_{v2 v1} chi_{v2 v0}^{-1} chi_{v1 v0}.
Jet delta_chi(const DeligneOne& a, const Simplex& s, const EvalPoint& p);

}  // namespace gerbecalc::deligne
