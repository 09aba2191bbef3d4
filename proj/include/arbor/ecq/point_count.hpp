#pragma once

// Point counting over F_p and the order-coprime-to-l test.

#include <cstdint>
#include <random>
#include <vector>

#include "arbor/ecq/curve.hpp"

namespace arbor::ecq {

/// Primes below this are counted by enumeration.
inline constexpr std::uint64_t kExhaustiveCountLimit = 1000;

/// Legendre symbol (a/p) for odd p: -1, 0 or 1.
int legendre(const PrimeField& k, std::uint64_t a);
/// Square root of a quadratic residue mod an odd prime (Tonelli-Shanks).
std::uint64_t sqrt_mod(const PrimeField& k, std::uint64_t a);

/// Every point of E(F_p), infinity first. Intended for small p.
std::vector<PointFp> enumerate_points(const CurveFp& E);

/// Uniformish random point of E(F_p) (never infinity).
PointFp random_point(const CurveFp& E, std::mt19937_64& rng);

/// |E(F_p)|: enumeration for p < 1000, else baby-step giant-step with twist
/// disambiguation. Deterministic (randomness seeded from p).
std::uint64_t group_order(const CurveFp& E);

/// Exact order of P given any multiple N of it.
std::uint64_t point_order(const CurveFp& E, const PointFp& P, std::uint64_t multiple);

/// Strips the l-part e of N and tests (N / l^e) * P = O.
bool order_coprime_to_ell(const CurveFp& E, const PointFp& P, std::uint64_t ell, std::uint64_t group_order);
bool order_coprime_to_ell(const CurveFp& E, const PointFp& P, std::uint64_t ell);

/// Whether some beta in E(F_p) has l^e * beta = P, e = val_l(|E(F_p)|), by enumeration.
bool has_ell_power_preimage(const CurveFp& E, const PointFp& P, std::uint64_t ell);

/// Compares the order criterion with the enumeration above; true when they agree.
/// Throws InputError for p >= 1000.
bool divisibility_cross_check(const CurveFp& E, const PointFp& P, std::uint64_t ell);

}  // namespace arbor::ecq
