#pragma once

// Deterministic corpus of random subgroups of GL2(Z/l^m), biased toward
// small and structured groups (Borel, scalar, congruence pieces) so that the
// invariants see nontrivial r, s and n_ell.

#include <random>
#include <vector>

#include "arbor/sdgroup.hpp"

namespace arbor::testing {

inline ModMat random_gl(const ModCtx& ctx, std::mt19937_64& rng) {
  for (;;) {
    auto q = ctx.modulus();
    ModMat g(ctx, static_cast<std::int64_t>(rng() % q), static_cast<std::int64_t>(rng() % q),
             static_cast<std::int64_t>(rng() % q), static_cast<std::int64_t>(rng() % q));
    if (g.is_invertible()) return g;
  }
}

inline std::int64_t random_unit(const ModCtx& ctx, std::mt19937_64& rng) {
  for (;;) {
    auto x = rng() % ctx.modulus();
    if (ctx.is_unit(x)) return static_cast<std::int64_t>(x);
  }
}

inline ModMat random_flavoured(const ModCtx& ctx, std::mt19937_64& rng, int flavour) {
  const auto q = ctx.modulus();
  auto any = [&] { return static_cast<std::int64_t>(rng() % q); };
  const auto l = static_cast<std::int64_t>(ctx.ell());
  switch (flavour) {
    case 0:
      return random_gl(ctx, rng);
    case 1:  // upper triangular
      return ModMat(ctx, random_unit(ctx, rng), any(), 0, random_unit(ctx, rng));
    case 2:  // scalar
      return ModMat::scalar(ctx, random_unit(ctx, rng));
    case 3: {  // congruent to I mod l^k
      int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(ctx.level()));
      auto s = static_cast<std::int64_t>(ctx.ell_pow(k));
      return ModMat(ctx, 1 + s * any(), s * any(), s * any(), 1 + s * any());
    }
    case 4:  // lower triangular mod l
      return ModMat(ctx, random_unit(ctx, rng), l * any(), any(), random_unit(ctx, rng));
    default:  // diagonal
      return ModMat(ctx, random_unit(ctx, rng), 0, 0, random_unit(ctx, rng));
  }
}

struct CorpusEntry {
  std::uint64_t ell;
  int level;
  SubgroupSpec spec;
};

/// `count` random linear subgroup specs with l in {2,3} and level <= max_level_m.
inline std::vector<CorpusEntry> random_corpus(std::size_t count, int max_level_m, std::uint64_t seed,
                                              std::size_t max_order = 0) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusEntry> out;
  while (out.size() < count) {
    std::uint64_t ell = rng() % 2 ? 3 : 2;
    int m = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_level_m));
    ModCtx ctx(ell, m);
    std::vector<ModMat> gens;
    int ngen = 1 + static_cast<int>(rng() % 3);
    int base = static_cast<int>(rng() % 6);
    for (int i = 0; i < ngen; ++i) {
      int flavour = rng() % 4 == 0 ? static_cast<int>(rng() % 6) : base;
      gens.push_back(random_flavoured(ctx, rng, flavour));
    }
    auto spec = SubgroupSpec::linear(ctx, gens);
    if (max_order != 0 && close(spec).order() > max_order) continue;
    out.push_back({ell, m, std::move(spec)});
  }
  return out;
}

}  // namespace arbor::testing
