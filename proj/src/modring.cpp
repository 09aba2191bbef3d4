#include "arbor/modring.hpp"

#include <algorithm>
#include <ostream>

#include "arbor/errors.hpp"

namespace arbor {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

int max_level(std::uint64_t ell) {
  unsigned __int128 limit = static_cast<unsigned __int128>(1) << 64;
  unsigned __int128 p4 = 1;
  int m = 0;
  for (;;) {
    unsigned __int128 next = p4 * ell * ell * ell * ell;
    if (next > limit) break;
    p4 = next;
    ++m;
  }
  return m;
}

ModCtx::ModCtx(std::uint64_t ell, int level) : ell_(ell), level_(level), modulus_(1) {
  if (!is_prime(ell)) throw InputError("ell = " + std::to_string(ell) + " is not prime");
  int cap = max_level(ell);
  if (level < 1 || level > cap)
    throw InputError("level " + std::to_string(level) + " outside [1, " + std::to_string(cap) +
                     "] for ell = " + std::to_string(ell));
  for (int i = 0; i < level; ++i) modulus_ *= ell;
}

Residue ModCtx::ell_pow(int e) const {
  Residue r = 1;
  for (int i = 0; i < e; ++i) r *= ell_;
  return r;
}

Residue ModCtx::reduce(std::int64_t x) const {
  auto m = static_cast<std::int64_t>(modulus_);
  std::int64_t r = x % m;
  if (r < 0) r += m;
  return static_cast<Residue>(r);
}

std::optional<Residue> ModCtx::inverse(Residue a) const {
  if (!is_unit(a)) return std::nullopt;
  std::int64_t r0 = static_cast<std::int64_t>(modulus_), r1 = static_cast<std::int64_t>(a % modulus_);
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  return reduce(s0);
}

int val_ell(Residue x, const ModCtx& ctx) {
  x %= ctx.modulus();
  if (x == 0) return ctx.level();
  int e = 0;
  while (x % ctx.ell() == 0) {
    x /= ctx.ell();
    ++e;
  }
  return e;
}

// ---- ModVec ----

int ModVec::valuation() const { return std::min(val_ell(e_[0], ctx_), val_ell(e_[1], ctx_)); }

ModVec ModVec::operator+(const ModVec& o) const {
  ModVec r(ctx_);
  r.e_ = {ctx_.add(e_[0], o.e_[0]), ctx_.add(e_[1], o.e_[1])};
  return r;
}

ModVec ModVec::operator-(const ModVec& o) const {
  ModVec r(ctx_);
  r.e_ = {ctx_.sub(e_[0], o.e_[0]), ctx_.sub(e_[1], o.e_[1])};
  return r;
}

ModVec ModVec::operator-() const {
  ModVec r(ctx_);
  r.e_ = {ctx_.neg(e_[0]), ctx_.neg(e_[1])};
  return r;
}

ModVec ModVec::operator*(const ModMat& m) const {
  ModVec r(ctx_);
  r.e_ = {ctx_.add(ctx_.mul(e_[0], m(0, 0)), ctx_.mul(e_[1], m(1, 0))),
          ctx_.add(ctx_.mul(e_[0], m(0, 1)), ctx_.mul(e_[1], m(1, 1)))};
  return r;
}

ModVec ModVec::scaled(Residue c) const {
  ModVec r(ctx_);
  c %= ctx_.modulus();
  r.e_ = {ctx_.mul(e_[0], c), ctx_.mul(e_[1], c)};
  return r;
}

ModVec ModVec::reduced(int level) const {
  if (level > ctx_.level()) throw InputError("cannot reduce to a higher level");
  ModCtx lower = ctx_.at_level(level);
  ModVec r(lower);
  r.e_ = {lower.reduce_u(e_[0]), lower.reduce_u(e_[1])};
  return r;
}

// ---- ModMat ----

Residue ModMat::det() const { return ctx_.sub(ctx_.mul(e_[0], e_[3]), ctx_.mul(e_[1], e_[2])); }

ModMat ModMat::inverse() const {
  auto inv = ctx_.inverse(det());
  if (!inv) throw InputError("matrix is not invertible mod " + std::to_string(ctx_.ell()));
  ModMat r(ctx_);
  r.e_ = {ctx_.mul(e_[3], *inv), ctx_.mul(ctx_.neg(e_[1]), *inv), ctx_.mul(ctx_.neg(e_[2]), *inv),
          ctx_.mul(e_[0], *inv)};
  return r;
}

std::optional<Residue> ModMat::scalar_value() const {
  if (e_[1] == 0 && e_[2] == 0 && e_[0] == e_[3]) return e_[0];
  return std::nullopt;
}

ModMat ModMat::operator*(const ModMat& o) const {
  ModMat r(ctx_);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.e_[static_cast<std::size_t>(2 * i + j)] =
          ctx_.add(ctx_.mul((*this)(i, 0), o(0, j)), ctx_.mul((*this)(i, 1), o(1, j)));
  return r;
}

ModMat ModMat::operator+(const ModMat& o) const {
  ModMat r(ctx_);
  for (std::size_t i = 0; i < 4; ++i) r.e_[i] = ctx_.add(e_[i], o.e_[i]);
  return r;
}

ModMat ModMat::operator-(const ModMat& o) const {
  ModMat r(ctx_);
  for (std::size_t i = 0; i < 4; ++i) r.e_[i] = ctx_.sub(e_[i], o.e_[i]);
  return r;
}

ModMat ModMat::scaled(Residue c) const {
  ModMat r(ctx_);
  for (std::size_t i = 0; i < 4; ++i) r.e_[i] = ctx_.mul(e_[i], c % ctx_.modulus());
  return r;
}

ModMat ModMat::reduced(int level) const {
  if (level > ctx_.level()) throw InputError("cannot reduce to a higher level");
  ModCtx lower = ctx_.at_level(level);
  ModMat r(lower);
  for (std::size_t i = 0; i < 4; ++i) r.e_[i] = lower.reduce_u(e_[i]);
  return r;
}

std::ostream& operator<<(std::ostream& os, const ModVec& v) {
  return os << '(' << v[0] << ", " << v[1] << ')';
}

std::ostream& operator<<(std::ostream& os, const ModMat& m) {
  return os << "[[" << m(0, 0) << ", " << m(0, 1) << "], [" << m(1, 0) << ", " << m(1, 1) << "]]";
}

// ---- submodules ----

Residue SubmoduleInfo::order() const { return ctx.ell_pow(log_order); }

bool SubmoduleInfo::contains(const ModVec& v) const {
  const int m = ctx.level();
  Residue y = v[1];
  if (a == m) {
    if (v[0] != 0) return false;
  } else {
    if (val_ell(v[0], ctx) < a) return false;
    Residue q = v[0] / ctx.ell_pow(a);
    y = ctx.sub(y, ctx.mul(q, c));
  }
  return val_ell(y, ctx) >= b;
}

SubmoduleInfo span_of(const ModCtx& ctx, std::span<const ModVec> vs) {
  const int m = ctx.level();
  std::vector<std::array<Residue, 2>> rows;
  rows.reserve(vs.size() + 1);
  for (const auto& v : vs) rows.push_back({ctx.reduce_u(v[0]), ctx.reduce_u(v[1])});

  SubmoduleInfo s{ctx, 0, 0, 0, {}, 0, true};
  s.a = m;
  std::optional<std::array<Residue, 2>> top;
  std::size_t piv = rows.size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    int e = val_ell(rows[i][0], ctx);
    if (e < s.a) {
      s.a = e;
      piv = i;
    }
  }
  std::vector<Residue> seconds;
  if (piv < rows.size()) {
    Residue pa = ctx.ell_pow(s.a);
    auto t = rows[piv];
    Residue uinv = *ctx.inverse(t[0] / pa);
    t = {ctx.mul(t[0], uinv), ctx.mul(t[1], uinv)};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == piv) continue;
      Residue q = rows[i][0] / pa;
      seconds.push_back(ctx.sub(rows[i][1], ctx.mul(q, t[1])));
    }
    // l^(m-a) * top lies in the span and has first coordinate 0.
    seconds.push_back(ctx.mul(ctx.ell_pow(m - s.a), t[1]));
    top = t;
  } else {
    for (const auto& r : rows) seconds.push_back(r[1]);
  }
  s.b = m;
  for (Residue y : seconds) s.b = std::min(s.b, val_ell(y, ctx));
  s.c = top ? (*top)[1] % ctx.ell_pow(s.b) : 0;
  s.log_order = (m - s.a) + (m - s.b);

  int top_ord = 0, bot_ord = m - s.b;
  std::vector<ModVec> gens;
  if (s.a < m) {
    ModVec t(ctx, static_cast<std::int64_t>(ctx.ell_pow(s.a)), static_cast<std::int64_t>(s.c));
    top_ord = m - t.valuation();
    gens.push_back(t);
  }
  if (s.b < m) gens.emplace_back(ctx, 0, static_cast<std::int64_t>(ctx.ell_pow(s.b)));
  s.cyclic = std::max(top_ord, bot_ord) == s.log_order;
  if (s.cyclic && gens.size() == 2) gens = {top_ord >= bot_ord ? gens[0] : gens[1]};
  s.generators = std::move(gens);
  return s;
}

// ---- Smith form ----

Smith2 smith_form(const ModMat& M) {
  const ModCtx& ctx = M.ctx();
  const int m = ctx.level();
  std::array<std::array<Residue, 2>, 2> A{{{M(0, 0), M(0, 1)}, {M(1, 0), M(1, 1)}}};
  std::array<std::array<Residue, 2>, 2> P{{{1, 0}, {0, 1}}}, Pi = P, Q = P;

  auto swap_rows = [&] {
    std::swap(A[0], A[1]);
    std::swap(P[0], P[1]);
    for (auto& r : Pi) std::swap(r[0], r[1]);
  };
  auto swap_cols = [&] {
    for (auto& r : A) std::swap(r[0], r[1]);
    for (auto& r : Q) std::swap(r[0], r[1]);
  };
  auto scale_row = [&](int i, Residue u, Residue uinv) {
    for (int j = 0; j < 2; ++j) {
      A[i][j] = ctx.mul(A[i][j], uinv);
      P[i][j] = ctx.mul(P[i][j], uinv);
      Pi[j][i] = ctx.mul(Pi[j][i], u);
    }
  };

  Smith2 out{ModMat(ctx), ModMat(ctx), ModMat(ctx)};
  int best = m, bi = 0, bj = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      int e = val_ell(A[i][j], ctx);
      if (e < best) {
        best = e;
        bi = i;
        bj = j;
      }
    }
  if (best < m) {
    if (bi == 1) swap_rows();
    if (bj == 1) swap_cols();
    Residue pa = ctx.ell_pow(best);
    Residue u = A[0][0] / pa;
    scale_row(0, u, *ctx.inverse(u));
    // row1 -= q*row0
    Residue q = A[1][0] / pa;
    for (int j = 0; j < 2; ++j) {
      A[1][j] = ctx.sub(A[1][j], ctx.mul(q, A[0][j]));
      P[1][j] = ctx.sub(P[1][j], ctx.mul(q, P[0][j]));
    }
    for (int i = 0; i < 2; ++i) Pi[i][0] = ctx.add(Pi[i][0], ctx.mul(q, Pi[i][1]));
    // col1 -= q*col0
    q = A[0][1] / pa;
    for (int i = 0; i < 2; ++i) {
      A[i][1] = ctx.sub(A[i][1], ctx.mul(q, A[i][0]));
      Q[i][1] = ctx.sub(Q[i][1], ctx.mul(q, Q[i][0]));
    }
    int e1 = val_ell(A[1][1], ctx);
    if (e1 < m) {
      Residue u1 = A[1][1] / ctx.ell_pow(e1);
      scale_row(1, u1, *ctx.inverse(u1));
    }
    out.d0 = best;
    out.d1 = e1;
  } else {
    out.d0 = out.d1 = m;
  }
  auto mk = [&](const std::array<std::array<Residue, 2>, 2>& X) {
    return ModMat(ctx, static_cast<std::int64_t>(X[0][0]), static_cast<std::int64_t>(X[0][1]),
                  static_cast<std::int64_t>(X[1][0]), static_cast<std::int64_t>(X[1][1]));
  };
  out.P = mk(P);
  out.Pinv = mk(Pi);
  out.Q = mk(Q);
  return out;
}

int log_image_order(const ModMat& M) {
  Smith2 s = smith_form(M);
  return 2 * M.ctx().level() - s.d0 - s.d1;
}

std::pair<SubmoduleInfo, SubmoduleInfo> image_kernel(const ModMat& M) {
  const ModCtx& ctx = M.ctx();
  const int m = ctx.level();
  Smith2 s = smith_form(M);
  ModMat Qinv = s.Q.inverse();
  auto row = [&](const ModMat& X, int i, Residue scale) {
    return ModVec(ctx, static_cast<std::int64_t>(X(i, 0)), static_cast<std::int64_t>(X(i, 1))).scaled(scale);
  };
  std::array<ModVec, 2> im{row(Qinv, 0, ctx.ell_pow(s.d0)), row(Qinv, 1, ctx.ell_pow(s.d1))};
  std::array<ModVec, 2> ker{row(s.P, 0, ctx.ell_pow(m - s.d0)), row(s.P, 1, ctx.ell_pow(m - s.d1))};
  return {span_of(ctx, im), span_of(ctx, ker)};
}

std::optional<ModVec> solve_affine(const ModVec& v, const ModMat& M) {
  const ModCtx& ctx = M.ctx();
  Smith2 s = smith_form(M);
  ModVec t = (-v) * s.Q;
  std::array<int, 2> d{s.d0, s.d1};
  std::array<std::int64_t, 2> u{};
  for (int i = 0; i < 2; ++i) {
    if (val_ell(t[i], ctx) < d[static_cast<std::size_t>(i)]) return std::nullopt;
    u[static_cast<std::size_t>(i)] =
        d[static_cast<std::size_t>(i)] == ctx.level()
            ? 0
            : static_cast<std::int64_t>(t[i] / ctx.ell_pow(d[static_cast<std::size_t>(i)]));
  }
  return ModVec(ctx, u[0], u[1]) * s.P;
}

std::pair<int, ModVec> primitive_decompose(const ModVec& v) {
  if (v.is_zero()) throw InputError("no primitive part: zero vector");
  const ModCtx& ctx = v.ctx();
  int t = v.valuation();
  Residue pt = ctx.ell_pow(t);
  return {t, ModVec(ctx, static_cast<std::int64_t>(v[0] / pt), static_cast<std::int64_t>(v[1] / pt))};
}

}  // namespace arbor
