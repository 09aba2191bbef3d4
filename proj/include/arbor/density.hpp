#pragma once

// Finite-level approximations to the density of primes at which a point has
// order prime to l.
//
// An element (v, g) of the image of omega fixes some l^n-division point iff
// w*(g - I) = -v is solvable mod l^n. The fraction f_n of such elements is
// nonincreasing in n and converges to the density.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arbor/sdgroup.hpp"

namespace arbor {

/// (l^5 - l^4 - l^3 + l + 1) / (l^5 - l^3 - l^2 + 1): the density when omega
/// is surjective.
mpq_class surjective_density(std::uint64_t ell);

/// Odd-order density for the index-4 image with surjective 2-adic rho; kept
/// as a reference value, the image itself must be supplied by the user.
inline mpq_class index_four_reference_density() { return mpq_class(179, 336); }

/// Largest level for which the full-image count is attempted.
inline constexpr std::uint64_t kDensityBudget = std::uint64_t{1} << 32;

/// f_n for the full image (Z/l^n)^2 x| GL2(Z/l^n): averages |im(g - I)| / l^(2n)
/// over GL2(Z/l^n) without materialising the affine group.
mpq_class fix_fraction_full(std::uint64_t ell, int n, unsigned threads = 1);

/// f_n for an affine subgroup given at level >= n (elements are reduced mod l^n).
mpq_class fix_fraction(const ClosedSubgroup& image, int n);

struct FixFractionReport {
  std::uint64_t ell = 2;
  std::string image;                    // "full" or a description of the affine image
  std::vector<int> levels;
  std::vector<mpq_class> fractions;
  bool nonincreasing = true;
  std::optional<mpq_class> closed_form; // surjective density, full image only
  bool above_closed_form = true;        // every f_n >= closed form (full image only)

  friend bool operator==(const FixFractionReport&, const FixFractionReport&) = default;
};

FixFractionReport density_report_full(std::uint64_t ell, int n_max, unsigned threads = 1);
FixFractionReport density_report(const ClosedSubgroup& image, int n_max);

}  // namespace arbor
