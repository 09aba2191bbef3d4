#pragma once

// Index bound for the image of the l-adic arboreal representation:
//
//   [Z_l^2 x| GL2(Z_l) : im omega] <= l^(2d + 2r + s) * [GL2(Z_l) : G]
//
// where G = im rho is given by generators at a finite level m (full-preimage
// convention), r is the least positive valuation of x - 1 over scalar
// matrices xI in G, s is the largest level carrying a G-stable cyclic
// subgroup of full order, and d is the divisibility depth of the point
// (supplied by the caller; see ecq/division.hpp).

#include <gmpxx.h>

#include <cstdint>

#include "arbor/modring.hpp"
#include "arbor/sdgroup.hpp"

namespace arbor {

struct BoundParams {
  std::uint64_t ell = 2;
  int d = 0;
  int r = 1;
  int s = 0;
  int n_ell = 1;
  std::uint64_t index = 1;

  friend bool operator==(const BoundParams&, const BoundParams&) = default;
};

/// l^(2d + 2r + s) * index, never wraps.
mpz_class theorem1_bound(const BoundParams& p);

int compute_r(const ClosedSubgroup& G);
int compute_s(const ClosedSubgroup& G);
int compute_n_ell(const ClosedSubgroup& G);

/// The subgroup S of (Z/l^m)^2 spanned by the orbit {p*g : g in G}.
struct OrbitSubgroup {
  ModVec base;
  SubmoduleInfo S;
  int k_prime = 0;  // [(Z/l^m)^2 : S] = l^k_prime
};

/// Throws InputError if p is not primitive. Throws std::logic_error if the
/// orbit index exceeds the stable-cyclic bound l^s (never expected).
OrbitSubgroup kummer_orbit(const ModVec& p, const ClosedSubgroup& G);
/// Same, with compute_s(G) already known.
OrbitSubgroup kummer_orbit(const ModVec& p, const ClosedSubgroup& G, int s);

struct BoundReport {
  BoundParams params;
  int level = 1;             // level at which r, s, n_ell were certified
  mpz_class bound;
  bool r_saturated = false;  // r == level: a deeper group could lower it
  bool s_saturated = false;  // s == level: a deeper group could raise it

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

/// Closes a linear spec and assembles every parameter.
BoundReport analyze(const SubgroupSpec& G, int d, std::uint64_t budget = kDefaultClosureBudget);
BoundReport analyze(const ClosedSubgroup& G, int d);

}  // namespace arbor
