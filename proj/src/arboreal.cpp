#include "arbor/arboreal.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "arbor/errors.hpp"

namespace arbor {

namespace {

void require_linear(const ClosedSubgroup& G, const char* what) {
  if (G.kind() != GroupKind::linear) throw InputError(std::string(what) + " needs a linear group");
}

// Is the line spanned by the primitive vector p stable under every g?
bool line_stable(const ModVec& p, const std::vector<ModMat>& gens) {
  const ModCtx& ctx = p.ctx();
  const int unit = ctx.is_unit(p[0]) ? 0 : 1;
  const Residue pinv = *ctx.inverse(p[unit]);
  for (const auto& g : gens) {
    ModVec q = p * g;
    Residue lambda = ctx.mul(q[unit], pinv);
    if (!(q == p.scaled(lambda))) return false;
  }
  return true;
}

}  // namespace

mpz_class theorem1_bound(const BoundParams& p) {
  mpz_class out;
  mpz_class l = static_cast<unsigned long>(p.ell);
  mpz_pow_ui(out.get_mpz_t(), l.get_mpz_t(), static_cast<unsigned long>(2 * p.d + 2 * p.r + p.s));
  out *= static_cast<unsigned long>(p.index);
  return out;
}

int compute_r(const ClosedSubgroup& G) {
  require_linear(G, "compute_r");
  const ModCtx& ctx = G.ctx();
  int r = ctx.level();
  for (const auto& x : G.elements()) {
    if (auto s = x.g.scalar_value()) {
      int e = val_ell(ctx.sub(*s, 1), ctx);
      if (e >= 1) r = std::min(r, e);
    }
  }
  return r;
}

int compute_s(const ClosedSubgroup& G) {
  require_linear(G, "compute_s");
  const ModCtx& top = G.ctx();
  const auto gens = G.spec().linear_generators();
  const auto ell = static_cast<std::int64_t>(top.ell());

  // Stable lines at level 1, lifted one level at a time; a line stable at
  // level k+1 reduces to one stable at level k.
  ModCtx ctx1 = top.at_level(1);
  std::vector<ModMat> g1;
  for (const auto& g : gens) g1.push_back(g.reduced(1));
  std::vector<ModVec> lines;
  for (std::int64_t y = 0; y < ell; ++y) lines.emplace_back(ctx1, 1, y);
  lines.emplace_back(ctx1, 0, 1);
  std::erase_if(lines, [&](const ModVec& p) { return !line_stable(p, g1); });
  if (lines.empty()) return 0;

  int s = 1;
  for (int k = 1; k < top.level(); ++k) {
    ModCtx next = top.at_level(k + 1);
    std::vector<ModMat> gk;
    for (const auto& g : gens) gk.push_back(g.reduced(k + 1));
    const auto step = static_cast<std::int64_t>(next.ell_pow(k));
    std::vector<ModVec> lifted;
    for (const auto& p : lines) {
      const bool first_is_one = p[0] == 1;
      for (std::int64_t t = 0; t < ell; ++t) {
        ModVec q = first_is_one ? ModVec(next, 1, static_cast<std::int64_t>(p[1]) + t * step)
                                : ModVec(next, static_cast<std::int64_t>(p[0]) + t * step, 1);
        if (line_stable(q, gk)) lifted.push_back(q);
      }
    }
    if (lifted.empty()) break;
    lines = std::move(lifted);
    s = k + 1;
  }
  return s;
}

int compute_n_ell(const ClosedSubgroup& G) {
  require_linear(G, "compute_n_ell");
  for (int n = 1; n < G.ctx().level(); ++n)
    if (full_preimage_contains_gamma(G, n)) return n;
  return G.ctx().level();
}

OrbitSubgroup kummer_orbit(const ModVec& p, const ClosedSubgroup& G, int s) {
  require_linear(G, "kummer_orbit");
  if (!(p.ctx() == G.ctx())) throw InputError("kummer_orbit: vector and group over different rings");
  if (!p.is_primitive()) throw InputError("kummer_orbit: base vector is not primitive (decompose first)");
  const auto gens = G.spec().linear_generators();
  std::vector<ModVec> seed{p};
  SubmoduleInfo S = span_of(p.ctx(), seed);
  for (;;) {
    std::vector<ModVec> next = S.generators;
    for (const auto& h : S.generators)
      for (const auto& g : gens) next.push_back(h * g);
    SubmoduleInfo T = span_of(p.ctx(), next);
    if (T == S) break;
    S = std::move(T);
  }
  OrbitSubgroup out{p, S, S.log_index()};
  if (out.k_prime > s)
    throw std::logic_error("kummer_orbit: orbit index l^" + std::to_string(out.k_prime) +
                           " exceeds stable-cyclic bound l^" + std::to_string(s));
  return out;
}

OrbitSubgroup kummer_orbit(const ModVec& p, const ClosedSubgroup& G) { return kummer_orbit(p, G, compute_s(G)); }

BoundReport analyze(const ClosedSubgroup& G, int d) {
  require_linear(G, "analyze");
  if (d < 0) throw InputError("d must be nonnegative");
  BoundReport rep;
  rep.level = G.ctx().level();
  rep.params.ell = G.ctx().ell();
  rep.params.d = d;
  rep.params.r = compute_r(G);
  rep.params.s = compute_s(G);
  rep.params.n_ell = compute_n_ell(G);
  rep.params.index = index_in_full(G);
  rep.bound = theorem1_bound(rep.params);
  rep.r_saturated = rep.params.r == rep.level;
  rep.s_saturated = rep.params.s == rep.level;
  return rep;
}

BoundReport analyze(const SubgroupSpec& G, int d, std::uint64_t budget) {
  if (G.kind() != GroupKind::linear) throw InputError("analyze needs a linear group");
  return analyze(close(G, budget), d);
}

}  // namespace arbor
