#pragma once

// Brute-force oracles shared by the unit and acceptance tests.

#include <gmpxx.h>

#include <optional>
#include <set>
#include <vector>

#include "arbor/sdgroup.hpp"

namespace arbor::testing {

// Direct enumeration of (Z/l^n)^2 x| GL2(Z/l^n): count (v, g) with some w,
// w*g + v = w, i.e. a fixed point of the affine map.
inline mpq_class brute_full(std::uint64_t ell, int n) {
  ModCtx ctx(ell, n);
  const auto q = static_cast<std::int64_t>(ctx.modulus());
  std::uint64_t total = 0, hits = 0;
  for (std::int64_t a = 0; a < q; ++a)
    for (std::int64_t b = 0; b < q; ++b)
      for (std::int64_t c = 0; c < q; ++c)
        for (std::int64_t d = 0; d < q; ++d) {
          ModMat g(ctx, a, b, c, d);
          if (!g.is_invertible()) continue;
          for (std::int64_t v0 = 0; v0 < q; ++v0)
            for (std::int64_t v1 = 0; v1 < q; ++v1) {
              ++total;
              ModVec v(ctx, v0, v1);
              bool fixed = false;
              for (std::int64_t w0 = 0; w0 < q && !fixed; ++w0)
                for (std::int64_t w1 = 0; w1 < q && !fixed; ++w1) {
                  ModVec w(ctx, w0, w1);
                  fixed = w * g + v == w;
                }
              if (fixed) ++hits;
            }
        }
  mpq_class f(static_cast<unsigned long>(hits), static_cast<unsigned long>(total));
  f.canonicalize();
  return f;
}

using Fn = std::vector<ModVec>;  // a function G -> M, by element index

inline std::vector<std::pair<Residue, Residue>> flatten(const Fn& f) {
  std::vector<std::pair<Residue, Residue>> out;
  for (const auto& v : f) out.push_back({v[0], v[1]});
  return out;
}

struct BruteH1 {
  std::size_t order = 1;      // |H^1|
  std::uint64_t exponent = 1;
};

// Every assignment of values to the generators, extended along products and
// kept only if the cocycle identity holds for all pairs.
inline BruteH1 brute_h1(const ClosedSubgroup& G, int n) {
  const ModCtx ctx = G.ctx().at_level(n);
  const auto& E = G.elements();
  const std::size_t N = E.size();
  const auto& gens = G.spec().generators();
  std::vector<ModMat> act;
  for (const auto& e : E) act.push_back(e.g.reduced(n));
  std::vector<std::vector<std::size_t>> mult(N, std::vector<std::size_t>(N));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) mult[i][j] = *G.index_of(compose(E[i], E[j]));
  std::vector<std::size_t> gen_idx;
  for (const auto& g : gens) gen_idx.push_back(*G.index_of(g));

  const auto q = static_cast<std::int64_t>(ctx.modulus());
  std::vector<ModVec> M;
  for (std::int64_t x = 0; x < q; ++x)
    for (std::int64_t y = 0; y < q; ++y) M.emplace_back(ctx, x, y);

  std::set<std::vector<std::pair<Residue, Residue>>> z1, b1;
  for (const auto& m : M) {
    Fn f;
    for (std::size_t i = 0; i < N; ++i) f.push_back(m * act[i] - m);
    b1.insert(flatten(f));
  }

  std::vector<std::size_t> choice(gens.size(), 0);
  for (;;) {
    std::vector<std::optional<ModVec>> xi(N);
    xi[*G.index_of(AffineElement::identity(G.ctx()))] = ModVec(ctx);
    for (std::size_t k = 0; k < gens.size(); ++k) {
      auto& slot = xi[gen_idx[k]];
      if (!slot) slot = M[choice[k]];
    }
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t i = 0; i < N; ++i) {
        if (!xi[i]) continue;
        for (std::size_t k = 0; k < gens.size(); ++k) {
          std::size_t j = mult[i][gen_idx[k]];
          if (xi[j] || !xi[gen_idx[k]]) continue;
          xi[j] = *xi[i] * act[gen_idx[k]] + *xi[gen_idx[k]];
          grew = true;
        }
      }
    }
    bool ok = true;
    for (std::size_t i = 0; i < N && ok; ++i)
      for (std::size_t j = 0; j < N && ok; ++j)
        ok = xi[i] && xi[j] && *xi[mult[i][j]] == *xi[i] * act[j] + *xi[j];
    if (ok) {
      Fn f;
      for (auto& v : xi) f.push_back(*v);
      z1.insert(flatten(f));
    }
    std::size_t k = 0;
    while (k < choice.size() && ++choice[k] == M.size()) choice[k++] = 0;
    if (k == choice.size()) break;
  }

  BruteH1 out;
  out.order = z1.size() / b1.size();
  for (const auto& z : z1) {
    std::uint64_t e = 1;
    auto cur = z;
    while (!b1.count(cur)) {
      for (std::size_t i = 0; i < cur.size(); ++i) {
        cur[i].first = ctx.add(cur[i].first, z[i].first);
        cur[i].second = ctx.add(cur[i].second, z[i].second);
      }
      ++e;
    }
    out.exponent = std::max(out.exponent, e);
  }
  return out;
}

}  // namespace arbor::testing
