#pragma once

// Exact arithmetic over Z/l^m: residues, row 2-vectors, 2x2 matrices and
// the submodule calculus (image, kernel, spans) of (Z/l^m)^2.
//
// Matrices act on ROW vectors from the right everywhere in this library:
// v -> v * M.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace arbor {

using Residue = std::uint64_t;

/// Returns true if n is prime (trial division; n is small in practice).
bool is_prime(std::uint64_t n);

/// Largest level m supported for a prime ell: l^(4m) must fit in 64 bits so
/// a packed 2x2 matrix key never overflows (m = 16 for l = 2).
int max_level(std::uint64_t ell);

/// The ring Z/l^m.
class ModCtx {
 public:
  /// Throws InputError if ell is not prime or level is outside [1, max_level(ell)].
  ModCtx(std::uint64_t ell, int level);

  std::uint64_t ell() const { return ell_; }
  int level() const { return level_; }
  Residue modulus() const { return modulus_; }

  /// l^e for 0 <= e <= level.
  Residue ell_pow(int e) const;

  Residue reduce(std::int64_t x) const;
  Residue reduce_u(std::uint64_t x) const { return x % modulus_; }
  Residue add(Residue a, Residue b) const { return (a + b) % modulus_; }
  Residue sub(Residue a, Residue b) const { return (a + modulus_ - b) % modulus_; }
  Residue neg(Residue a) const { return a == 0 ? 0 : modulus_ - a; }
  Residue mul(Residue a, Residue b) const { return (a * b) % modulus_; }

  bool is_unit(Residue a) const { return a % ell_ != 0; }
  /// Inverse of a unit; std::nullopt if a is divisible by l.
  std::optional<Residue> inverse(Residue a) const;

  /// Same ring at a lower (or equal) level.
  ModCtx at_level(int level) const { return ModCtx(ell_, level); }

  friend bool operator==(const ModCtx& a, const ModCtx& b) {
    return a.ell_ == b.ell_ && a.level_ == b.level_;
  }

 private:
  std::uint64_t ell_;
  int level_;
  Residue modulus_;
};

/// l-adic valuation truncated at the level: val_ell(0) == m.
int val_ell(Residue x, const ModCtx& ctx);

class ModMat;

/// Row vector in (Z/l^m)^2.
class ModVec {
 public:
  explicit ModVec(const ModCtx& ctx) : ctx_(ctx), e_{0, 0} {}
  ModVec(const ModCtx& ctx, std::int64_t x0, std::int64_t x1)
      : ctx_(ctx), e_{ctx.reduce(x0), ctx.reduce(x1)} {}

  const ModCtx& ctx() const { return ctx_; }
  Residue operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }

  bool is_zero() const { return e_[0] == 0 && e_[1] == 0; }
  /// At least one entry is a unit.
  bool is_primitive() const { return ctx_.is_unit(e_[0]) || ctx_.is_unit(e_[1]); }
  /// Minimal valuation of the entries (m for the zero vector).
  int valuation() const;

  ModVec operator+(const ModVec& o) const;
  ModVec operator-(const ModVec& o) const;
  ModVec operator-() const;
  ModVec operator*(const ModMat& m) const;
  ModVec scaled(Residue c) const;
  ModVec reduced(int level) const;

  friend bool operator==(const ModVec& a, const ModVec& b) {
    return a.ctx_ == b.ctx_ && a.e_ == b.e_;
  }

 private:
  ModCtx ctx_;
  std::array<Residue, 2> e_;
};

/// 2x2 matrix over Z/l^m, row-major.
class ModMat {
 public:
  explicit ModMat(const ModCtx& ctx) : ctx_(ctx), e_{0, 0, 0, 0} {}
  ModMat(const ModCtx& ctx, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
      : ctx_(ctx), e_{ctx.reduce(a), ctx.reduce(b), ctx.reduce(c), ctx.reduce(d)} {}

  static ModMat identity(const ModCtx& ctx) { return ModMat(ctx, 1, 0, 0, 1); }
  static ModMat scalar(const ModCtx& ctx, std::int64_t x) { return ModMat(ctx, x, 0, 0, x); }

  const ModCtx& ctx() const { return ctx_; }
  Residue operator()(int i, int j) const { return e_[static_cast<std::size_t>(2 * i + j)]; }
  const std::array<Residue, 4>& entries() const { return e_; }

  Residue det() const;
  /// det is a unit mod l.
  bool is_invertible() const { return ctx_.is_unit(det()); }
  /// Throws InputError if the matrix is not invertible.
  ModMat inverse() const;
  bool is_identity() const { return e_ == std::array<Residue, 4>{1 % ctx_.modulus(), 0, 0, 1 % ctx_.modulus()}; }
  /// The scalar x if this is x*I.
  std::optional<Residue> scalar_value() const;

  ModMat operator*(const ModMat& o) const;
  ModMat operator+(const ModMat& o) const;
  ModMat operator-(const ModMat& o) const;
  ModMat scaled(Residue c) const;
  ModMat reduced(int level) const;

  friend bool operator==(const ModMat& a, const ModMat& b) {
    return a.ctx_ == b.ctx_ && a.e_ == b.e_;
  }

 private:
  ModCtx ctx_;
  std::array<Residue, 4> e_;
};

std::ostream& operator<<(std::ostream& os, const ModVec& v);
std::ostream& operator<<(std::ostream& os, const ModMat& m);

/// A subgroup of (Z/l^m)^2 held in Howell form: rows (l^a, c) and (0, l^b)
/// with 0 <= c < l^b. The form is unique, so equality of submodules is
/// equality of (a, c, b).
struct SubmoduleInfo {
  ModCtx ctx;
  int a = 0;       // first-coordinate valuation of the top row (m if absent)
  Residue c = 0;   // second coordinate of the top row
  int b = 0;       // valuation of the bottom row (m if absent)
  std::vector<ModVec> generators;  // at most two; exactly one when cyclic (none for {0})
  int log_order = 0;               // |S| = l^log_order
  bool cyclic = true;

  Residue order() const;
  bool contains(const ModVec& v) const;
  /// log_l of the index of S in (Z/l^m)^2.
  int log_index() const { return 2 * ctx.level() - log_order; }

  friend bool operator==(const SubmoduleInfo& x, const SubmoduleInfo& y) {
    return x.ctx == y.ctx && x.a == y.a && x.c == y.c && x.b == y.b;
  }
};

/// The subgroup spanned by vs (the zero subgroup for an empty list).
SubmoduleInfo span_of(const ModCtx& ctx, std::span<const ModVec> vs);

/// Smith form P * M * Q = diag(l^d0, l^d1) with P, Q invertible, d0 <= d1
/// (valuations truncated at m).
struct Smith2 {
  ModMat P, Pinv, Q;
  int d0 = 0, d1 = 0;
};
Smith2 smith_form(const ModMat& M);

/// Image and kernel of v -> v * M on row vectors.
std::pair<SubmoduleInfo, SubmoduleInfo> image_kernel(const ModMat& M);

/// log_l |image(v -> v*M)|; cheaper than image_kernel when only the size matters.
int log_image_order(const ModMat& M);

/// Some w with w * M == -v, if one exists.
std::optional<ModVec> solve_affine(const ModVec& v, const ModMat& M);

/// v = l^t * p with p primitive. Throws InputError on the zero vector.
std::pair<int, ModVec> primitive_decompose(const ModVec& v);

}  // namespace arbor
