#include "arbor/ecq/scan.hpp"

#include <algorithm>
#include <exception>
#include <random>
#include <stdexcept>
#include <thread>

#include "arbor/ecq/point_count.hpp"
#include "arbor/modring.hpp"

namespace arbor::ecq {

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

ScanResult density_scan(const CurveQ& E, const PointQ& alpha, std::uint64_t ell, std::uint64_t limit,
                        const ScanOptions& opts) {
  if (!is_prime(ell)) throw InputError("ell = " + std::to_string(ell) + " is not prime");
  if (limit > kMaxScanLimit) throw InputError("scan limit above " + std::to_string(kMaxScanLimit));
  if (!E.contains(alpha)) throw InputError("point " + to_string(alpha) + " is not on the curve");
  if (torsion_order(E, alpha)) throw InputError("point must be non-torsion");

  const auto primes = primes_up_to(limit);
  std::vector<ScanRecord> recs(primes.size());
  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, std::max<std::size_t>(1, primes.size())));
  auto work = [&](unsigned t) {
    const std::size_t lo = primes.size() * t / threads, hi = primes.size() * (t + 1) / threads;
    std::optional<Reduction> red;
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint64_t p = primes[i];
      recs[i].prime = p;
      if (try_reduce_mod_p(E, alpha, p, red) != ReductionStatus::good) continue;
      recs[i].good = true;
      const std::uint64_t N = group_order(red->curve);
      if (opts.verify_samples > 0) {
        std::mt19937_64 rng(p ^ 0x9e3779b97f4a7c15ULL);
        for (int s = 0; s < opts.verify_samples; ++s)
          if (!red->curve.mul(random_point(red->curve, rng), static_cast<long>(N)).infinity)
            throw std::logic_error("group order check failed at p = " + std::to_string(p));
      }
      recs[i].coprime_order = order_coprime_to_ell(red->curve, red->point, ell, N);
    }
  };
  std::vector<std::exception_ptr> errors(threads);
  auto guarded = [&](unsigned t) {
    try {
      work(t);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(guarded, t);
  guarded(0);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  ScanResult res;
  res.ell = ell;
  res.limit = limit;
  for (const auto& r : recs) {
    if (!r.good) {
      ++res.skipped;
      continue;
    }
    ++res.good;
    if (r.coprime_order) ++res.coprime;
  }
  if (res.good == 0) throw EmptyResultError("empty scan: no prime <= " + std::to_string(limit) + " of good reduction");
  res.fraction = mpq_class(static_cast<unsigned long>(res.coprime), static_cast<unsigned long>(res.good));
  res.fraction.canonicalize();
  if (opts.keep_records) res.records = std::move(recs);
  return res;
}

}  // namespace arbor::ecq
