#pragma once

// Empirical density of primes p at which alpha mod p has order prime to l.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "arbor/ecq/curve.hpp"

namespace arbor::ecq {

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

inline constexpr std::uint64_t kMaxScanLimit = std::uint64_t{1} << 31;

struct ScanRecord {
  std::uint64_t prime = 0;
  bool good = false;
  bool coprime_order = false;

  friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

struct ScanResult {
  std::uint64_t ell = 2;
  std::uint64_t limit = 0;
  std::uint64_t good = 0;
  std::uint64_t coprime = 0;
  std::uint64_t skipped = 0;   // bad reduction or p-divisible denominators
  mpq_class fraction;          // coprime / good
  std::vector<ScanRecord> records;  // filled only when requested

  friend bool operator==(const ScanResult&, const ScanResult&) = default;
};

struct ScanOptions {
  unsigned threads = 1;
  bool keep_records = false;
  /// Random points per prime checked against N * P = O.
  int verify_samples = 0;
};

/// Throws InputError for torsion alpha or an oversized limit, EmptyResultError
/// ("empty scan") when no prime <= limit has good reduction.
ScanResult density_scan(const CurveQ& E, const PointQ& alpha, std::uint64_t ell, std::uint64_t limit,
                        const ScanOptions& opts = {});

}  // namespace arbor::ecq
