#include "arbor/sdgroup.hpp"

#include <deque>
#include <string>

#include "arbor/errors.hpp"

namespace arbor {

namespace {

unsigned __int128 pack(const AffineElement& x) {
  const Residue M = x.ctx().modulus();
  const auto& e = x.g.entries();
  std::uint64_t gk = e[0] + M * (e[1] + M * (e[2] + M * e[3]));
  std::uint64_t vk = x.v[0] + M * x.v[1];
  return (static_cast<unsigned __int128>(gk) << 64) | vk;
}

std::int64_t s64(Residue r) { return static_cast<std::int64_t>(r); }

// A generator of (Z/l^2)^*, hence of (Z/l^m)^* for odd l.
std::int64_t primitive_root_mod_l2(std::uint64_t ell) {
  const std::uint64_t q = ell * ell, phi = ell * (ell - 1);
  for (std::uint64_t g = 2; g < q; ++g) {
    if (g % ell == 0) continue;
    std::uint64_t x = 1, ord = 0;
    do {
      x = x * g % q;
      ++ord;
    } while (x != 1);
    if (ord == phi) return static_cast<std::int64_t>(g);
  }
  return 1;
}

}  // namespace

AffineElement compose(const AffineElement& a, const AffineElement& b) {
  if (!(a.ctx() == b.ctx())) throw InputError("compose: elements live over different rings");
  return {a.v * b.g + b.v, a.g * b.g};
}

AffineElement inverse(const AffineElement& a) {
  ModMat gi = a.g.inverse();
  return {-(a.v * gi), gi};
}

AffineElement reduce_level(const AffineElement& a, int level) {
  return {a.v.reduced(level), a.g.reduced(level)};
}

const char* to_string(GroupKind k) { return k == GroupKind::linear ? "linear" : "affine"; }

SubgroupSpec::SubgroupSpec(const ModCtx& ctx, GroupKind kind, std::vector<AffineElement> gens)
    : ctx_(ctx), kind_(kind), gens_(std::move(gens)) {
  if (gens_.empty()) throw InputError("generator list is empty (use the identity for the trivial group)");
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const auto& x = gens_[i];
    if (!(x.ctx() == ctx_) || !(x.v.ctx() == ctx_))
      throw InputError("generator " + std::to_string(i) + " is over a different ring");
    if (!x.g.is_invertible())
      throw InputError("generator " + std::to_string(i) + " is not invertible mod " + std::to_string(ctx_.ell()));
    if (kind_ == GroupKind::linear && !x.v.is_zero())
      throw InputError("generator " + std::to_string(i) + " of a linear group has a translation");
  }
}

SubgroupSpec SubgroupSpec::linear(const ModCtx& ctx, std::vector<ModMat> gens) {
  std::vector<AffineElement> xs;
  xs.reserve(gens.size());
  for (auto& g : gens) xs.emplace_back(ModVec(ctx), std::move(g));
  return SubgroupSpec(ctx, GroupKind::linear, std::move(xs));
}

SubgroupSpec SubgroupSpec::affine(const ModCtx& ctx, std::vector<AffineElement> gens) {
  return SubgroupSpec(ctx, GroupKind::affine, std::move(gens));
}

SubgroupSpec SubgroupSpec::full_linear(const ModCtx& ctx) {
  // SL2 is generated by the two elementary matrices; diagonal units fill in det.
  std::vector<ModMat> gens{ModMat(ctx, 1, 1, 0, 1), ModMat(ctx, 1, 0, 1, 1)};
  if (ctx.ell() == 2) {
    gens.emplace_back(ctx, -1, 0, 0, 1);
    gens.emplace_back(ctx, 5, 0, 0, 1);
  } else {
    gens.emplace_back(ctx, primitive_root_mod_l2(ctx.ell()), 0, 0, 1);
  }
  return linear(ctx, std::move(gens));
}

SubgroupSpec SubgroupSpec::full_affine(const ModCtx& ctx) {
  std::vector<AffineElement> gens = full_linear(ctx).generators();
  gens.push_back(AffineElement::translation(ModVec(ctx, 1, 0)));
  gens.push_back(AffineElement::translation(ModVec(ctx, 0, 1)));
  return affine(ctx, std::move(gens));
}

std::vector<ModMat> SubgroupSpec::linear_generators() const {
  std::vector<ModMat> out;
  out.reserve(gens_.size());
  for (const auto& x : gens_) out.push_back(x.g);
  return out;
}

SubgroupSpec SubgroupSpec::reduced(int level) const {
  std::vector<AffineElement> gens;
  gens.reserve(gens_.size());
  for (const auto& x : gens_) gens.push_back(reduce_level(x, level));
  return SubgroupSpec(ctx_.at_level(level), kind_, std::move(gens));
}

mpz_class ambient_order(const ModCtx& ctx, GroupKind kind) {
  mpz_class l = static_cast<unsigned long>(ctx.ell());
  mpz_class order;
  mpz_pow_ui(order.get_mpz_t(), l.get_mpz_t(), 4 * static_cast<unsigned long>(ctx.level() - 1));
  order *= (l * l - 1) * (l * l - l);
  if (kind == GroupKind::affine) {
    mpz_class t;
    mpz_pow_ui(t.get_mpz_t(), l.get_mpz_t(), 2 * static_cast<unsigned long>(ctx.level()));
    order *= t;
  }
  return order;
}

std::size_t ClosedSubgroup::KeyHash::operator()(unsigned __int128 k) const noexcept {
  auto hi = static_cast<std::uint64_t>(k >> 64), lo = static_cast<std::uint64_t>(k);
  std::uint64_t h = hi * 0x9E3779B97F4A7C15ULL ^ (lo + 0x632BE59BD9B4E019ULL + (hi << 6) + (hi >> 2));
  h ^= h >> 31;
  h *= 0xBF58476D1CE4E5B9ULL;
  h ^= h >> 29;
  return static_cast<std::size_t>(h);
}

std::optional<std::size_t> ClosedSubgroup::index_of(const AffineElement& x) const {
  if (!(x.ctx() == ctx())) return std::nullopt;
  auto it = index_.find(pack(x));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ClosedSubgroup close(const SubgroupSpec& spec, std::uint64_t budget) {
  mpz_class ambient = ambient_order(spec.ctx(), spec.kind());
  if (ambient > mpz_class(static_cast<unsigned long>(budget)))
    throw BudgetError("closure refused: ambient " + std::string(to_string(spec.kind())) + " group has order " +
                      ambient.get_str() + " > budget " + std::to_string(budget));

  ClosedSubgroup out(spec);
  AffineElement id = AffineElement::identity(spec.ctx());
  out.elements_.push_back(id);
  out.index_.emplace(pack(id), 0u);
  // FIFO over the element list itself.
  for (std::size_t head = 0; head < out.elements_.size(); ++head) {
    for (const auto& gen : spec.generators()) {
      AffineElement y = compose(out.elements_[head], gen);
      auto key = pack(y);
      if (out.index_.find(key) != out.index_.end()) continue;
      out.index_.emplace(key, static_cast<std::uint32_t>(out.elements_.size()));
      out.elements_.push_back(std::move(y));
    }
  }
  mpz_class rem = ambient % static_cast<unsigned long>(out.elements_.size());
  if (rem != 0) throw std::logic_error("closure order does not divide the ambient order");
  return out;
}

std::uint64_t index_in_full(const ClosedSubgroup& sub) {
  mpz_class idx = ambient_order(sub.ctx(), sub.kind()) / static_cast<unsigned long>(sub.order());
  return idx.get_ui();
}

ClosedSubgroup reduce_level(const ClosedSubgroup& sub, int level) {
  if (level > sub.ctx().level())
    throw InputError("reduce_level: target level " + std::to_string(level) + " exceeds level " +
                     std::to_string(sub.ctx().level()));
  return close(sub.spec().reduced(level));
}

bool full_preimage_contains_gamma(const ClosedSubgroup& sub, int n) {
  const ModCtx& ctx = sub.ctx();
  if (n >= ctx.level()) return true;
  const Residue q = ctx.ell_pow(n);
  std::uint64_t hits = 0;
  for (const auto& x : sub.elements()) {
    const auto& e = x.g.entries();
    if ((e[0] + ctx.modulus() - 1) % q == 0 && e[1] % q == 0 && e[2] % q == 0 && (e[3] + ctx.modulus() - 1) % q == 0)
      ++hits;
  }
  // |Gamma(l^n) / Gamma(l^m)| = l^(4(m-n))
  return hits == ctx.ell_pow(ctx.level() - n) * ctx.ell_pow(ctx.level() - n) * ctx.ell_pow(ctx.level() - n) *
                     ctx.ell_pow(ctx.level() - n);
}

SubgroupSpec preimage_spec(const SubgroupSpec& spec, int level, std::uint64_t budget) {
  const int m0 = spec.ctx().level();
  if (level <= m0) return spec.reduced(level);

  ModCtx ctx(spec.ctx().ell(), level);
  const auto step = s64(ctx.ell_pow(m0));
  std::vector<AffineElement> gens;
  for (const auto& x : spec.generators()) {
    const auto& e = x.g.entries();
    gens.emplace_back(ModVec(ctx, s64(x.v[0]), s64(x.v[1])), ModMat(ctx, s64(e[0]), s64(e[1]), s64(e[2]), s64(e[3])));
  }
  for (int k = 0; k < 4; ++k) {
    std::int64_t d[4] = {1, 0, 0, 1};
    d[k] += step;
    gens.emplace_back(ModVec(ctx), ModMat(ctx, d[0], d[1], d[2], d[3]));
  }
  if (spec.kind() == GroupKind::affine) {
    gens.push_back(AffineElement::translation(ModVec(ctx, step, 0)));
    gens.push_back(AffineElement::translation(ModVec(ctx, 0, step)));
  }
  auto make = [&](std::vector<AffineElement> g) {
    return spec.kind() == GroupKind::linear ? SubgroupSpec::linear(ctx, [&] {
      std::vector<ModMat> ms;
      for (auto& x : g) ms.push_back(x.g);
      return ms;
    }())
                                            : SubgroupSpec::affine(ctx, std::move(g));
  };

  const std::size_t base = close(spec, budget).order();
  const Residue lift = ctx.ell_pow(level - m0);
  const std::uint64_t expected =
      base * lift * lift * lift * lift * (spec.kind() == GroupKind::affine ? lift * lift : 1);
  // The congruence kernel is not always generated by the elementary lifts
  // (l = 2, m0 = 1); add missing kernel elements until the order is right.
  for (;;) {
    SubgroupSpec cand = make(gens);
    ClosedSubgroup c = close(cand, budget);
    if (c.order() == expected) return cand;
    bool added = false;
    const Residue span = lift;
    for (Residue i = 0; i < span * span * span * span && !added; ++i) {
      Residue t = i;
      std::int64_t d[4];
      for (auto& di : d) {
        di = s64(t % span) * step;
        t /= span;
      }
      ModMat g(ctx, 1 + d[0], d[1], d[2], 1 + d[3]);
      if (!c.contains(g)) {
        gens.emplace_back(ModVec(ctx), g);
        added = true;
      }
    }
    if (!added) throw std::logic_error("preimage_spec: congruence kernel present but order mismatch");
  }
}

}  // namespace arbor
