#include "arbor/density.hpp"

#include <algorithm>
#include <thread>

#include "arbor/errors.hpp"
#include "arbor/modring.hpp"

namespace arbor {

mpq_class surjective_density(std::uint64_t ell) {
  if (!is_prime(ell)) throw InputError("ell = " + std::to_string(ell) + " is not prime");
  mpz_class l = static_cast<unsigned long>(ell);
  mpz_class l2 = l * l, l3 = l2 * l, l4 = l3 * l, l5 = l4 * l;
  mpq_class q(l5 - l4 - l3 + l + 1, l5 - l3 - l2 + 1);
  q.canonicalize();
  return q;
}

namespace {

unsigned __int128 full_matrix_count(const ModCtx& ctx, int n) {
  const Residue q = ctx.modulus();
  const unsigned __int128 total = static_cast<unsigned __int128>(q) * q * q * q;
  if (total > kDensityBudget)
    throw BudgetError("full-image density at level " + std::to_string(n) + " needs " + std::to_string(q) +
                      "^4 matrices (budget " + std::to_string(kDensityBudget) + ")");
  return total;
}

}  // namespace

mpq_class fix_fraction_full(std::uint64_t ell, int n, unsigned threads) {
  const ModCtx ctx(ell, n);
  const Residue q = ctx.modulus();
  const unsigned __int128 total = full_matrix_count(ctx, n);
  const auto count = static_cast<std::uint64_t>(total);
  threads = std::max(1u, threads);

  struct Partial {
    std::uint64_t gl = 0;        // |GL2| contributions
    unsigned __int128 fixed = 0; // sum of |im(g - I)|
  };
  std::vector<Partial> parts(threads);
  auto work = [&](unsigned t) {
    Partial& p = parts[t];
    const std::uint64_t lo = count * t / threads, hi = count * (t + 1) / threads;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const auto a = static_cast<std::int64_t>(i % q), b = static_cast<std::int64_t>((i / q) % q);
      const auto c = static_cast<std::int64_t>((i / q / q) % q), d = static_cast<std::int64_t>(i / q / q / q);
      ModMat g(ctx, a, b, c, d);
      if (!g.is_invertible()) continue;
      ++p.gl;
      std::uint64_t image = 1;
      for (int e = log_image_order(g - ModMat::identity(ctx)); e > 0; --e) image *= ell;
      p.fixed += image;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& th : pool) th.join();

  std::uint64_t gl = 0;
  unsigned __int128 fixed = 0;
  for (const auto& p : parts) {
    gl += p.gl;
    fixed += p.fixed;
  }
  auto to_mpz = [](unsigned __int128 x) -> mpz_class {
    mpz_class hi = static_cast<unsigned long>(static_cast<std::uint64_t>(x >> 64));
    mpz_class lo = static_cast<unsigned long>(static_cast<std::uint64_t>(x));
    return (hi << 64) + lo;
  };
  mpq_class f(to_mpz(fixed), mpz_class(static_cast<unsigned long>(gl)) * q * q);
  f.canonicalize();
  return f;
}

mpq_class fix_fraction(const ClosedSubgroup& image, int n) {
  if (image.kind() != GroupKind::affine) throw InputError("fix_fraction needs an affine image");
  if (n < 1 || n > image.ctx().level())
    throw InputError("level " + std::to_string(n) + " outside [1, " + std::to_string(image.ctx().level()) + "]");
  const ModCtx ctx = image.ctx().at_level(n);
  std::uint64_t hits = 0;
  for (const auto& x : image.elements()) {
    AffineElement y = reduce_level(x, n);
    if (solve_affine(y.v, y.g - ModMat::identity(ctx))) ++hits;
  }
  mpq_class f(static_cast<unsigned long>(hits), static_cast<unsigned long>(image.order()));
  f.canonicalize();
  return f;
}

namespace {

void finish(FixFractionReport& rep) {
  for (std::size_t i = 1; i < rep.fractions.size(); ++i)
    if (rep.fractions[i] > rep.fractions[i - 1]) rep.nonincreasing = false;
  if (rep.closed_form)
    for (const auto& f : rep.fractions)
      if (f < *rep.closed_form) rep.above_closed_form = false;
}

}  // namespace

FixFractionReport density_report_full(std::uint64_t ell, int n_max, unsigned threads) {
  if (n_max < 1) throw InputError("level must be at least 1");
  FixFractionReport rep;
  rep.ell = ell;
  rep.image = "full";
  rep.closed_form = surjective_density(ell);
  full_matrix_count(ModCtx(ell, n_max), n_max);
  for (int n = 1; n <= n_max; ++n) {
    rep.levels.push_back(n);
    rep.fractions.push_back(fix_fraction_full(ell, n, threads));
  }
  finish(rep);
  return rep;
}

FixFractionReport density_report(const ClosedSubgroup& image, int n_max) {
  if (n_max < 1) throw InputError("level must be at least 1");
  FixFractionReport rep;
  rep.ell = image.ctx().ell();
  rep.image = "affine subgroup of order " + std::to_string(image.order()) + " at level " +
              std::to_string(image.ctx().level());
  for (int n = 1; n <= n_max; ++n) {
    rep.levels.push_back(n);
    rep.fractions.push_back(fix_fraction(image, n));
  }
  finish(rep);
  return rep;
}

}  // namespace arbor
