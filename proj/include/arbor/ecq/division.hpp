#pragma once

// l-division of rational points for l in {2, 3} via division polynomials,
// rational l-power torsion, and the divisibility depth d.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "arbor/ecq/curve.hpp"

namespace arbor::ecq {

/// Coefficients, constant term first.
using PolyQ = std::vector<mpq_class>;
using PolyZ = std::vector<mpz_class>;

/// phi_l(x) - x(alpha) psi_l(x)^2 for affine alpha; the l-torsion x-polynomial
/// (psi_2^2 or psi_3) for alpha = O.
PolyQ division_polynomial(const CurveQ& E, const PointQ& alpha, std::uint64_t ell);

/// Every rational root of f (exact; Hensel lifting plus rational reconstruction).
std::vector<mpq_class> rational_roots(const PolyQ& f);

/// All beta in E(Q) with l * beta = alpha. Throws InputError if alpha is not on
/// E or l is not 2 or 3.
std::vector<PointQ> divide_point(const CurveQ& E, const PointQ& alpha, std::uint64_t ell);

/// Rational torsion of l-power order, infinity first. Search depth is capped
/// at order 16 (l = 2) and 9 (l = 3), the largest possible over Q.
std::vector<PointQ> rational_ell_power_torsion(const CurveQ& E, std::uint64_t ell);

inline constexpr int kMaxDivisionDepth = 64;

struct DivisionReport {
  std::uint64_t ell = 2;
  int d = 0;
  PointQ torsion;              // T achieving d
  std::vector<PointQ> chain;   // alpha - T, then successive preimages down to gamma
  std::vector<PointQ> rational_torsion;
  bool depth_capped = false;

  friend bool operator==(const DivisionReport&, const DivisionReport&) = default;
};

/// Largest d with alpha = l^d gamma + T over rational l-power torsion T.
/// Throws InputError("point must be non-torsion") for torsion alpha.
DivisionReport divisibility_report(const CurveQ& E, const PointQ& alpha, std::uint64_t ell,
                                   int max_depth = kMaxDivisionDepth);
int compute_d(const CurveQ& E, const PointQ& alpha, std::uint64_t ell);

}  // namespace arbor::ecq
