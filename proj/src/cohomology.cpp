#include "arbor/cohomology.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

#include "arbor/arboreal.hpp"
#include "arbor/errors.hpp"

namespace arbor {

DenseMat DenseMat::identity(int n) {
  DenseMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

SmithForm smith_form(const DenseMat& A0, const ModCtx& ctx) {
  const int n = ctx.level();
  const int R = A0.rows, C = A0.cols;
  DenseMat A = A0;
  SmithForm out{DenseMat::identity(R), DenseMat::identity(R), DenseMat::identity(C), std::vector<int>(static_cast<std::size_t>(R), n)};
  DenseMat &P = out.P, &Pi = out.Pinv, &Q = out.Q;

  for (int t = 0; t < std::min(R, C); ++t) {
    int best = n, bi = t, bj = t;
    for (int i = t; i < R && best > 0; ++i)
      for (int j = t; j < C; ++j) {
        int e = val_ell(A(i, j), ctx);
        if (e < best) {
          best = e;
          bi = i;
          bj = j;
          if (e == 0) break;
        }
      }
    if (best == n) break;
    if (bi != t) {
      for (int j = 0; j < C; ++j) std::swap(A(t, j), A(bi, j));
      for (int j = 0; j < R; ++j) std::swap(P(t, j), P(bi, j));
      for (int i = 0; i < R; ++i) std::swap(Pi(i, t), Pi(i, bi));
    }
    if (bj != t) {
      for (int i = 0; i < R; ++i) std::swap(A(i, t), A(i, bj));
      for (int i = 0; i < C; ++i) std::swap(Q(i, t), Q(i, bj));
    }
    const Residue pa = ctx.ell_pow(best);
    const Residue u = A(t, t) / pa, uinv = *ctx.inverse(u);
    for (int j = 0; j < C; ++j) A(t, j) = ctx.mul(A(t, j), uinv);
    for (int j = 0; j < R; ++j) P(t, j) = ctx.mul(P(t, j), uinv);
    for (int i = 0; i < R; ++i) Pi(i, t) = ctx.mul(Pi(i, t), u);

    for (int i = t + 1; i < R; ++i) {
      const Residue q = A(i, t) / pa;
      if (q == 0) continue;
      for (int j = t; j < C; ++j) A(i, j) = ctx.sub(A(i, j), ctx.mul(q, A(t, j)));
      for (int j = 0; j < R; ++j) P(i, j) = ctx.sub(P(i, j), ctx.mul(q, P(t, j)));
      for (int k = 0; k < R; ++k) Pi(k, t) = ctx.add(Pi(k, t), ctx.mul(q, Pi(k, i)));
    }
    for (int j = t + 1; j < C; ++j) {
      const Residue q = A(t, j) / pa;
      if (q == 0) continue;
      A(t, j) = 0;
      for (int i = 0; i < C; ++i) Q(i, j) = ctx.sub(Q(i, j), ctx.mul(q, Q(i, t)));
    }
    out.d[static_cast<std::size_t>(t)] = best;
  }
  return out;
}

std::vector<int> quotient_invariants(const DenseMat& A, const ModCtx& ctx) {
  SmithForm s = smith_form(A, ctx);
  std::vector<int> out;
  for (int i = 0; i < A.cols; ++i) {
    int e = i < A.rows ? s.d[static_cast<std::size_t>(i)] : ctx.level();
    if (e > 0) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Echelon basis of a submodule of (Z/l^n)^D, one row per pivot column.
class Echelon {
 public:
  Echelon(const ModCtx& ctx, int dim) : ctx_(ctx), rows_(static_cast<std::size_t>(dim)) {}

  void insert(std::vector<Residue> r) {
    const int D = static_cast<int>(rows_.size());
    for (int j = 0; j < D; ++j) {
      auto uj = static_cast<std::size_t>(j);
      while (r[uj] != 0) {
        const int e = val_ell(r[uj], ctx_);
        auto& piv = rows_[uj];
        if (!piv) {
          normalise(r, j, e);
          piv = std::move(r);
          return;
        }
        const int a = val_ell((*piv)[uj], ctx_);
        if (e >= a) {
          const Residue q = r[uj] / ctx_.ell_pow(a);
          for (int k = j; k < D; ++k) {
            auto uk = static_cast<std::size_t>(k);
            r[uk] = ctx_.sub(r[uk], ctx_.mul(q, (*piv)[uk]));
          }
        } else {
          normalise(r, j, e);
          std::swap(r, *piv);
        }
      }
    }
  }

  DenseMat as_columns() const {
    std::vector<const std::vector<Residue>*> live;
    for (const auto& r : rows_)
      if (r) live.push_back(&*r);
    DenseMat A(static_cast<int>(rows_.size()), static_cast<int>(live.size()));
    for (int c = 0; c < A.cols; ++c)
      for (int i = 0; i < A.rows; ++i) A(i, c) = (*live[static_cast<std::size_t>(c)])[static_cast<std::size_t>(i)];
    return A;
  }

 private:
  void normalise(std::vector<Residue>& r, int j, int e) const {
    const Residue uinv = *ctx_.inverse(r[static_cast<std::size_t>(j)] / ctx_.ell_pow(e));
    for (auto& x : r) x = ctx_.mul(x, uinv);
  }

  ModCtx ctx_;
  std::vector<std::optional<std::vector<Residue>>> rows_;
};

}  // namespace

H1Computation h1_with_cocycles(const ClosedSubgroup& G, int n, std::size_t budget) {
  if (G.kind() != GroupKind::linear) throw InputError("h1 needs a linear group");
  if (n < 1 || n > G.ctx().level())
    throw InputError("module level " + std::to_string(n) + " must lie in [1, " + std::to_string(G.ctx().level()) + "]");
  if (G.order() > budget)
    throw BudgetError("h1 refused: |G| = " + std::to_string(G.order()) + " > budget " + std::to_string(budget));

  const ModCtx ctx = G.ctx().at_level(n);
  const auto& elems = G.elements();
  const std::size_t N = elems.size();
  const auto& gens_full = G.spec().generators();
  const int k = static_cast<int>(gens_full.size());
  const int D = 2 * k;  // unknowns: xi(g_j) for each generator, 2 coordinates each
  std::vector<ModMat> gens;
  for (const auto& x : gens_full) gens.push_back(x.g.reduced(n));

  // Coefficients: xi(x) = u * C_x with u in (Z/l^n)^D, C_x a D x 2 block.
  std::vector<Residue> C(N * static_cast<std::size_t>(D) * 2, 0);
  auto coef = [&](std::size_t x, int row, int col) -> Residue& {
    return C[(x * static_cast<std::size_t>(D) + static_cast<std::size_t>(row)) * 2 + static_cast<std::size_t>(col)];
  };
  std::vector<char> seen(N, 0);
  std::vector<std::size_t> queue{0};
  seen[0] = 1;
  Echelon rel(ctx, D);
  std::vector<Residue> cand(static_cast<std::size_t>(D) * 2);

  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t x = queue[head];
    for (int j = 0; j < k; ++j) {
      auto y = G.index_of(compose(elems[x], gens_full[static_cast<std::size_t>(j)]));
      if (!y) throw std::logic_error("h1: group is not closed under its generators");
      const ModMat& g = gens[static_cast<std::size_t>(j)];
      // cand = C_x * g + E_j
      for (int r = 0; r < D; ++r) {
        const Residue c0 = coef(x, r, 0), c1 = coef(x, r, 1);
        cand[static_cast<std::size_t>(2 * r)] = ctx.add(ctx.mul(c0, g(0, 0)), ctx.mul(c1, g(1, 0)));
        cand[static_cast<std::size_t>(2 * r + 1)] = ctx.add(ctx.mul(c0, g(0, 1)), ctx.mul(c1, g(1, 1)));
      }
      cand[static_cast<std::size_t>(2 * (2 * j))] = ctx.add(cand[static_cast<std::size_t>(2 * (2 * j))], 1);
      cand[static_cast<std::size_t>(2 * (2 * j + 1) + 1)] = ctx.add(cand[static_cast<std::size_t>(2 * (2 * j + 1) + 1)], 1);
      if (!seen[*y]) {
        seen[*y] = 1;
        for (int r = 0; r < D; ++r)
          for (int c = 0; c < 2; ++c) coef(*y, r, c) = cand[static_cast<std::size_t>(2 * r + c)];
        queue.push_back(*y);
      } else {
        for (int c = 0; c < 2; ++c) {
          std::vector<Residue> col(static_cast<std::size_t>(D));
          bool nonzero = false;
          for (int r = 0; r < D; ++r) {
            col[static_cast<std::size_t>(r)] = ctx.sub(cand[static_cast<std::size_t>(2 * r + c)], coef(*y, r, c));
            nonzero |= col[static_cast<std::size_t>(r)] != 0;
          }
          if (nonzero) rel.insert(std::move(col));
        }
      }
    }
  }
  if (queue.size() != N) throw std::logic_error("h1: generators do not reach every element");

  // Z^1 = { u : u * A = 0 }.
  const DenseMat A = rel.as_columns();
  const SmithForm sf = smith_form(A, ctx);
  std::vector<int> zfac;           // valuations d_i of the cyclic factors of Z^1
  std::vector<int> zrow;           // which row of P generates each factor
  for (int i = 0; i < D; ++i) {
    int d = sf.d[static_cast<std::size_t>(i)];
    if (d > 0) {
      zfac.push_back(d);
      zrow.push_back(i);
    }
  }
  const int f = static_cast<int>(zfac.size());

  // Coboundaries in Z^1 coordinates: w = b_T * Pinv, coordinate w_i / l^(n-d_i).
  DenseMat pres(f + 2, f);
  for (int i = 0; i < f; ++i) pres(i, i) = ctx.ell_pow(zfac[static_cast<std::size_t>(i)]) % ctx.modulus();
  for (int t = 0; t < 2; ++t) {
    std::vector<Residue> b(static_cast<std::size_t>(D));
    ModVec T(ctx, t == 0 ? 1 : 0, t == 0 ? 0 : 1);
    for (int j = 0; j < k; ++j) {
      ModVec val = T * gens[static_cast<std::size_t>(j)] - T;
      b[static_cast<std::size_t>(2 * j)] = val[0];
      b[static_cast<std::size_t>(2 * j + 1)] = val[1];
    }
    for (int i = 0; i < f; ++i) {
      const int row = zrow[static_cast<std::size_t>(i)];
      Residue w = 0;
      for (int r = 0; r < D; ++r) w = ctx.add(w, ctx.mul(b[static_cast<std::size_t>(r)], sf.Pinv(r, row)));
      const Residue step = ctx.ell_pow(n - zfac[static_cast<std::size_t>(i)]);
      if (w % step != 0) throw std::logic_error("h1: coboundary is not a cocycle (inconsistent relation system)");
      pres(f + t, i) = w / step;
    }
  }
  const std::vector<int> hfac = quotient_invariants(pres, ctx);

  H1Computation out;
  H1Result& res = out.result;
  res.ell = ctx.ell();
  res.module_level = n;
  res.group_level = G.ctx().level();
  res.group_order = N;
  for (int e : hfac) res.factors.push_back(ctx.ell_pow(e));
  res.exponent = res.factors.empty() ? 1 : res.factors.back();
  res.sah_bound = sah_exponent_bound(G);
  for (int d : zfac) res.log_z1 += d;
  int log_h = 0;
  for (int e : hfac) log_h += e;
  res.log_b1 = res.log_z1 - log_h;

  // |B^1| = |M| / |M^G|, with M^G the kernel of T -> (T(g_j - I))_j.
  DenseMat fixm(2, D);
  for (int j = 0; j < k; ++j) {
    ModMat h = gens[static_cast<std::size_t>(j)] - ModMat::identity(ctx);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) fixm(r, 2 * j + c) = h(r, c);
  }
  const SmithForm fs = smith_form(fixm, ctx);
  const int log_fixed = fs.d[0] + fs.d[1];
  if (res.log_b1 != 2 * n - log_fixed) throw std::logic_error("h1: |B^1| != |M| / |M^G|");

  // Generators of Z^1 as explicit cocycles.
  for (int i = 0; i < f; ++i) {
    const int row = zrow[static_cast<std::size_t>(i)];
    const Residue step = ctx.ell_pow(n - zfac[static_cast<std::size_t>(i)]);
    std::vector<Residue> u(static_cast<std::size_t>(D));
    for (int r = 0; r < D; ++r) u[static_cast<std::size_t>(r)] = ctx.mul(step, sf.P(row, r));
    Cocycle xi;
    xi.values.reserve(N);
    for (std::size_t x = 0; x < N; ++x) {
      Residue v0 = 0, v1 = 0;
      for (int r = 0; r < D; ++r) {
        v0 = ctx.add(v0, ctx.mul(u[static_cast<std::size_t>(r)], coef(x, r, 0)));
        v1 = ctx.add(v1, ctx.mul(u[static_cast<std::size_t>(r)], coef(x, r, 1)));
      }
      xi.values.emplace_back(ctx, static_cast<std::int64_t>(v0), static_cast<std::int64_t>(v1));
    }
    out.z1_generators.push_back(std::move(xi));
  }
  return out;
}

H1Result h1(const ClosedSubgroup& G, int n, std::size_t budget) { return h1_with_cocycles(G, n, budget).result; }

bool satisfies_cocycle_identity(const ClosedSubgroup& G, const Cocycle& xi, int n, std::size_t g, std::size_t h) {
  const auto& E = G.elements();
  auto gh = G.index_of(compose(E[g], E[h]));
  if (!gh) return false;
  ModMat hm = E[h].g.reduced(n);
  return xi.values[*gh] == xi.values[g] * hm + xi.values[h];
}

std::uint64_t sah_exponent_bound(const ClosedSubgroup& G) { return G.ctx().ell_pow(compute_r(G)); }

H1Tower h1_tower(const SubgroupSpec& spec, int n, int level_lo, int level_hi, std::size_t budget) {
  if (n < 1) throw InputError("module level must be at least 1");
  if (level_lo > level_hi) throw InputError("empty level range");
  if (level_lo < n) throw InputError("group level " + std::to_string(level_lo) + " is below module level " + std::to_string(n));
  if (spec.kind() != GroupKind::linear) throw InputError("h1 needs a linear group");
  H1Tower out;
  for (int m = level_lo; m <= level_hi; ++m) {
    ClosedSubgroup G = close(preimage_spec(spec, m));
    out.levels.push_back(m);
    out.results.push_back(h1(G, n, budget));
    if (out.results.size() > 1 && out.results.back().factors != out.results.front().factors) out.constant = false;
  }
  return out;
}

}  // namespace arbor
