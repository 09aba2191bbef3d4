#pragma once

// The finite-level semidirect product (Z/l^m)^2 x| GL2(Z/l^m) and its
// subgroups.
//
// Multiplication law: (v, g) * (w, h) = (v*h + w, g*h). An element acts on a
// row vector x by x -> x*g + v, and "a * b" means "apply a, then b".
//
// A SubgroupSpec at level m stands for the l-adic group that is the full
// preimage of its finite closure, so every invariant derived from it is
// decidable at level m.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "arbor/modring.hpp"

namespace arbor {

struct AffineElement {
  ModVec v;
  ModMat g;

  explicit AffineElement(const ModCtx& ctx) : v(ctx), g(ModMat::identity(ctx)) {}
  AffineElement(ModVec v_, ModMat g_) : v(std::move(v_)), g(std::move(g_)) {}

  static AffineElement identity(const ModCtx& ctx) { return AffineElement(ctx); }
  static AffineElement translation(const ModVec& v) { return {v, ModMat::identity(v.ctx())}; }

  const ModCtx& ctx() const { return g.ctx(); }
  bool is_identity() const { return v.is_zero() && g.is_identity(); }

  friend bool operator==(const AffineElement& a, const AffineElement& b) {
    return a.v == b.v && a.g == b.g;
  }
};

/// (v*h + w, g*h). Throws InputError if the rings differ.
AffineElement compose(const AffineElement& a, const AffineElement& b);
/// (-v*g^-1, g^-1).
AffineElement inverse(const AffineElement& a);
AffineElement reduce_level(const AffineElement& a, int level);

enum class GroupKind { linear, affine };

const char* to_string(GroupKind k);

/// Generators of a subgroup of GL2(Z/l^m) (linear) or of the semidirect
/// product (affine). Linear generators are stored with zero translation.
class SubgroupSpec {
 public:
  static SubgroupSpec linear(const ModCtx& ctx, std::vector<ModMat> gens);
  static SubgroupSpec affine(const ModCtx& ctx, std::vector<AffineElement> gens);
  static SubgroupSpec full_linear(const ModCtx& ctx);
  static SubgroupSpec full_affine(const ModCtx& ctx);

  const ModCtx& ctx() const { return ctx_; }
  GroupKind kind() const { return kind_; }
  const std::vector<AffineElement>& generators() const { return gens_; }
  std::vector<ModMat> linear_generators() const;

  /// The same generators reduced to a lower level.
  SubgroupSpec reduced(int level) const;

 private:
  SubgroupSpec(const ModCtx& ctx, GroupKind kind, std::vector<AffineElement> gens);

  ModCtx ctx_;
  GroupKind kind_;
  std::vector<AffineElement> gens_;
};

/// |GL2(Z/l^m)| = l^(4(m-1)) (l^2-1)(l^2-l), times l^(2m) for the affine group.
mpz_class ambient_order(const ModCtx& ctx, GroupKind kind);

/// Default closure budget on the ambient order.
inline constexpr std::uint64_t kDefaultClosureBudget = std::uint64_t{1} << 30;

/// A subgroup with every element enumerated (breadth-first order from the
/// identity, so enumeration order is reproducible).
class ClosedSubgroup {
 public:
  const SubgroupSpec& spec() const { return spec_; }
  const ModCtx& ctx() const { return spec_.ctx(); }
  GroupKind kind() const { return spec_.kind(); }
  std::size_t order() const { return elements_.size(); }
  const std::vector<AffineElement>& elements() const { return elements_; }

  std::optional<std::size_t> index_of(const AffineElement& x) const;
  bool contains(const AffineElement& x) const { return index_of(x).has_value(); }
  bool contains(const ModMat& g) const { return contains(AffineElement(ModVec(g.ctx()), g)); }

 private:
  friend ClosedSubgroup close(const SubgroupSpec& spec, std::uint64_t budget);

  struct KeyHash {
    std::size_t operator()(unsigned __int128 k) const noexcept;
  };

  explicit ClosedSubgroup(SubgroupSpec spec) : spec_(std::move(spec)) {}

  SubgroupSpec spec_;
  std::vector<AffineElement> elements_;
  std::unordered_map<unsigned __int128, std::uint32_t, KeyHash> index_;
};

/// Breadth-first closure of the generators. Throws BudgetError if the
/// ambient order exceeds the budget.
ClosedSubgroup close(const SubgroupSpec& spec, std::uint64_t budget = kDefaultClosureBudget);

/// [ambient : sub]; exact.
std::uint64_t index_in_full(const ClosedSubgroup& sub);

/// Image of the subgroup under reduction mod l^level.
ClosedSubgroup reduce_level(const ClosedSubgroup& sub, int level);

/// True iff every matrix congruent to I mod l^n lies in the (linear) subgroup.
bool full_preimage_contains_gamma(const ClosedSubgroup& sub, int n);

/// A spec at `level` generating the full preimage of `spec` (reduction when
/// level <= spec level).
SubgroupSpec preimage_spec(const SubgroupSpec& spec, int level, std::uint64_t budget = kDefaultClosureBudget);

}  // namespace arbor
