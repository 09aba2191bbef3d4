#pragma once

// H^1(G, (Z/l^n)^2) for a finite matrix group G acting on row vectors from
// the right, with the cocycle convention
//
//   xi(g h) = xi(g) * h + xi(h),     coboundaries  xi_T(g) = T*g - T.
//
// Z^1 is parametrised by the values on the generators of G: the values on
// every other element follow a breadth-first spanning tree of the Cayley
// graph, and each non-tree edge contributes one linear relation over Z/l^n.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "arbor/modring.hpp"
#include "arbor/sdgroup.hpp"

namespace arbor {

/// Default limit on |G| for h1.
inline constexpr std::size_t kDefaultH1Budget = 100000;

struct H1Result {
  std::uint64_t ell = 2;
  int module_level = 1;                // n: the module is (Z/l^n)^2
  int group_level = 1;                 // level of the acting group
  std::uint64_t group_order = 1;
  std::vector<std::uint64_t> factors;  // cyclic factor orders, ascending; empty when trivial
  std::uint64_t exponent = 1;
  std::uint64_t sah_bound = 1;
  int log_z1 = 0;                      // |Z^1| = l^log_z1
  int log_b1 = 0;                      // |B^1| = l^log_b1

  bool trivial() const { return factors.empty(); }
  friend bool operator==(const H1Result&, const H1Result&) = default;
};

/// A 1-cocycle, stored by its value on every element of the group (indexed
/// as in ClosedSubgroup::elements()).
struct Cocycle {
  std::vector<ModVec> values;
};

struct H1Computation {
  H1Result result;
  std::vector<Cocycle> z1_generators;
};

/// Throws BudgetError if |G| exceeds the budget, InputError if n is outside
/// [1, level of G] or G is not linear.
H1Result h1(const ClosedSubgroup& G, int n, std::size_t budget = kDefaultH1Budget);
H1Computation h1_with_cocycles(const ClosedSubgroup& G, int n, std::size_t budget = kDefaultH1Budget);

/// True if xi(gh) == xi(g)*h + xi(h) for the given element indices.
bool satisfies_cocycle_identity(const ClosedSubgroup& G, const Cocycle& xi, int n, std::size_t g, std::size_t h);

/// l^r with r = compute_r(G): the scalar (1 + unit*l^r)I is central, so
/// multiplication by l^r kills H^1.
std::uint64_t sah_exponent_bound(const ClosedSubgroup& G);

struct H1Tower {
  std::vector<int> levels;
  std::vector<H1Result> results;
  bool constant = true;  // same structure at every level tested

  friend bool operator==(const H1Tower&, const H1Tower&) = default;
};

/// h1 of the full preimage of `spec` at each level in [level_lo, level_hi],
/// acting on (Z/l^n)^2.
H1Tower h1_tower(const SubgroupSpec& spec, int n, int level_lo, int level_hi,
                 std::size_t budget = kDefaultH1Budget);

/// Dense matrix over Z/l^n, row-major. Used for the relation systems.
struct DenseMat {
  int rows = 0, cols = 0;
  std::vector<Residue> a;

  DenseMat() = default;
  DenseMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0) {}
  static DenseMat identity(int n);
  Residue& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
  Residue operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
};

/// P * A * Q = D with D diagonal (l^d[i] on the diagonal; d[i] = n for
/// zero or missing diagonal entries, i < rows).
struct SmithForm {
  DenseMat P, Pinv, Q;
  std::vector<int> d;
};
SmithForm smith_form(const DenseMat& A, const ModCtx& ctx);

/// Invariant-factor valuations of (Z/l^n)^cols / rowspan(A), nonzero ones only.
std::vector<int> quotient_invariants(const DenseMat& A, const ModCtx& ctx);

}  // namespace arbor
