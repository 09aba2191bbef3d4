#include "arbor/ecq/division.hpp"

#include <algorithm>
#include <stdexcept>

namespace arbor::ecq {

namespace {

void trim(PolyQ& f) {
  while (!f.empty() && sgn(f.back()) == 0) f.pop_back();
}

int degree(const PolyQ& f) { return static_cast<int>(f.size()) - 1; }

PolyQ derivative(const PolyQ& f) {
  PolyQ d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<long>(i));
  trim(d);
  return d;
}

PolyQ mul(const PolyQ& a, const PolyQ& b) {
  if (a.empty() || b.empty()) return {};
  PolyQ c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  trim(c);
  return c;
}

PolyQ sub(PolyQ a, const PolyQ& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

PolyQ scale(PolyQ a, const mpq_class& s) {
  for (auto& c : a) c *= s;
  trim(a);
  return a;
}

// Quotient and remainder of a by nonzero b.
std::pair<PolyQ, PolyQ> divmod(PolyQ a, const PolyQ& b) {
  trim(a);
  const int db = degree(b);
  PolyQ q(std::max(0, degree(a) - db + 1), 0);
  while (degree(a) >= db) {
    const int shift = degree(a) - db;
    const mpq_class c = a.back() / b.back();
    q[shift] = c;
    for (int i = 0; i <= db; ++i) a[shift + i] -= c * b[i];
    trim(a);
  }
  trim(q);
  return {q, a};
}

PolyQ monic_gcd(PolyQ a, PolyQ b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyQ r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  return scale(a, 1 / mpq_class(a.back()));
}

mpq_class eval(const PolyQ& f, const mpq_class& x) {
  mpq_class r = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) r = r * x + *it;
  return r;
}

mpz_class eval_mod(const PolyZ& f, const mpz_class& x, const mpz_class& M) {
  mpz_class r = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) {
    r = r * x + *it;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), M.get_mpz_t());
  }
  return r;
}

PolyZ derivative(const PolyZ& f) {
  PolyZ d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<long>(i));
  return d;
}

// Integer multiple of f with coprime coefficients.
PolyZ clear_denominators(const PolyQ& f) {
  mpz_class den = 1;
  for (const auto& c : f) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  PolyZ g;
  mpz_class content = 0;
  for (const auto& c : f) {
    mpz_class v = c.get_num() * (den / c.get_den());
    g.push_back(v);
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
  }
  for (auto& c : g) c /= content;
  return g;
}

using PolyP = std::vector<std::uint64_t>;

void trim(PolyP& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  for (a %= p; e; e >>= 1, a = a * a % p)
    if (e & 1) r = r * a % p;
  return r;
}

// Degree of gcd(a, b) over F_p.
int gcd_degree_mod_p(PolyP a, PolyP b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    const std::uint64_t inv = pow_mod(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
      const std::uint64_t c = a.back() * inv % p;
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = (a[shift + i] + p - c * b[i] % p) % p;
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return static_cast<int>(a.size()) - 1;
}

bool is_small_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

// u/v with |u|, |v| <= sqrt(M/2) and u = r v mod M, if one exists.
std::optional<mpq_class> reconstruct(const mpz_class& r, const mpz_class& M) {
  mpz_class bound;
  mpz_class half = M / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = M, r1 = r, t0 = 0, t1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (sgn(t1) == 0 || abs(t1) > bound) return std::nullopt;
  mpq_class x(r1, t1);
  x.canonicalize();
  return x;
}

std::optional<mpq_class> rational_sqrt(const mpq_class& a) {
  if (sgn(a) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(a.get_num_mpz_t()) || !mpz_perfect_square_p(a.get_den_mpz_t())) return std::nullopt;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), a.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), a.get_den_mpz_t());
  mpq_class r(n, d);
  r.canonicalize();
  return r;
}

bool contains_point(const std::vector<PointQ>& v, const PointQ& P) {
  return std::find(v.begin(), v.end(), P) != v.end();
}

void require_ell(std::uint64_t ell) {
  if (ell != 2 && ell != 3) throw InputError("division over Q supports ell = 2 or 3, got " + std::to_string(ell));
}

}  // namespace

PolyQ division_polynomial(const CurveQ& E, const PointQ& alpha, std::uint64_t ell) {
  require_ell(ell);
  const mpq_class b2 = E.b2(), b4 = E.b4(), b6 = E.b6(), b8 = E.b8();
  const PolyQ psi2sq{b6, 2 * b4, b2, 4};
  const PolyQ psi3{b8, 3 * b6, 3 * b4, b2, 3};
  if (alpha.infinity) return ell == 2 ? psi2sq : psi3;
  const mpq_class& x0 = alpha.x;
  if (ell == 2) {
    const PolyQ phi2{-b8, -2 * b6, -b4, 0, 1};
    return sub(phi2, scale(psi2sq, x0));
  }
  const PolyQ F{b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2};
  const PolyQ psi3sq = mul(psi3, psi3);
  const PolyQ x_psi3sq = mul(PolyQ{0, 1}, psi3sq);
  return sub(sub(x_psi3sq, mul(psi2sq, F)), scale(psi3sq, x0));
}

std::vector<mpq_class> rational_roots(const PolyQ& f_in) {
  PolyQ f = f_in;
  for (auto& c : f) c.canonicalize();
  trim(f);
  if (f.empty()) throw std::invalid_argument("rational_roots of the zero polynomial");
  std::vector<mpq_class> roots;
  if (degree(f) == 0) return roots;

  PolyQ g = divmod(f, monic_gcd(f, derivative(f))).first;
  if (sgn(g[0]) == 0) {
    roots.push_back(0);
    g.erase(g.begin());
  }
  if (degree(g) < 1) return roots;
  if (degree(g) == 1) {
    roots.push_back(-g[0] / g[1]);
    return roots;
  }

  const PolyZ h = clear_denominators(g);
  const PolyZ dh = derivative(h);
  std::uint64_t p = 3;
  PolyP hp, dhp;
  for (;; ++p) {
    if (!is_small_prime(p) || mpz_divisible_ui_p(h.back().get_mpz_t(), p)) continue;
    hp.clear();
    dhp.clear();
    for (const auto& c : h) hp.push_back(mpz_fdiv_ui(c.get_mpz_t(), p));
    for (const auto& c : dh) dhp.push_back(mpz_fdiv_ui(c.get_mpz_t(), p));
    if (gcd_degree_mod_p(hp, dhp, p) == 0) break;
  }

  const mpz_class B = std::max(abs(h.front()), abs(h.back()));
  const mpz_class target = 2 * B * B;
  for (std::uint64_t r0 = 0; r0 < p; ++r0) {
    std::uint64_t v = 0;
    for (auto it = hp.rbegin(); it != hp.rend(); ++it) v = (v * r0 + *it) % p;
    if (v != 0) continue;
    mpz_class r = static_cast<unsigned long>(r0), M = static_cast<unsigned long>(p);
    while (M <= target) {
      M *= M;
      mpz_class d = eval_mod(dh, r, M), inv;
      mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), M.get_mpz_t());
      r -= eval_mod(h, r, M) * inv;
      mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), M.get_mpz_t());
    }
    if (auto x = reconstruct(r, M); x && sgn(eval(g, *x)) == 0) roots.push_back(*x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<PointQ> divide_point(const CurveQ& E, const PointQ& alpha, std::uint64_t ell) {
  require_ell(ell);
  if (!E.contains(alpha)) throw InputError("point " + to_string(alpha) + " is not on the curve");
  std::vector<PointQ> out;
  if (alpha.infinity) out.push_back(PointQ::at_infinity());
  const long l = static_cast<long>(ell);
  for (const auto& x : rational_roots(division_polynomial(E, alpha, ell))) {
    const mpq_class h = E.linear_y_term(x);
    const auto s = rational_sqrt(h * h + 4 * E.rhs(x));
    if (!s) continue;
    for (const mpq_class& y : {mpq_class((-h + *s) / 2), mpq_class((-h - *s) / 2)}) {
      PointQ beta = PointQ::affine(x, y);
      if (contains_point(out, beta)) continue;
      if (!E.contains(beta)) throw std::logic_error("recovered point is off the curve");
      if (E.mul(beta, l) == alpha) out.push_back(beta);
    }
  }
  return out;
}

std::vector<PointQ> rational_ell_power_torsion(const CurveQ& E, std::uint64_t ell) {
  require_ell(ell);
  const int max_levels = ell == 2 ? 4 : 2;  // orders 16 and 9
  std::vector<PointQ> all{PointQ::at_infinity()};
  std::vector<PointQ> frontier = all;
  for (int level = 0; level < max_levels && !frontier.empty(); ++level) {
    std::vector<PointQ> next;
    for (const auto& P : frontier)
      for (auto& beta : divide_point(E, P, ell))
        if (!contains_point(all, beta)) {
          all.push_back(beta);
          next.push_back(beta);
        }
    frontier = std::move(next);
  }
  return all;
}

DivisionReport divisibility_report(const CurveQ& E, const PointQ& alpha, std::uint64_t ell, int max_depth) {
  require_ell(ell);
  if (!E.contains(alpha)) throw InputError("point " + to_string(alpha) + " is not on the curve");
  if (torsion_order(E, alpha)) throw InputError("point must be non-torsion");
  DivisionReport rep;
  rep.ell = ell;
  rep.rational_torsion = rational_ell_power_torsion(E, ell);
  rep.d = -1;
  for (const auto& T : rep.rational_torsion) {
    std::vector<std::vector<PointQ>> chains{{E.sub(alpha, T)}};
    int depth = 0;
    bool capped = false;
    while (true) {
      if (depth == max_depth) {
        capped = true;
        break;
      }
      std::vector<std::vector<PointQ>> next;
      std::vector<PointQ> seen;
      for (const auto& c : chains)
        for (auto& beta : divide_point(E, c.back(), ell)) {
          if (contains_point(seen, beta)) continue;
          seen.push_back(beta);
          next.push_back(c);
          next.back().push_back(beta);
        }
      if (next.empty()) break;
      chains = std::move(next);
      ++depth;
    }
    if (depth > rep.d) {
      rep.d = depth;
      rep.torsion = T;
      rep.chain = chains.front();
      rep.depth_capped = capped;
    }
  }
  return rep;
}

int compute_d(const CurveQ& E, const PointQ& alpha, std::uint64_t ell) {
  return divisibility_report(E, alpha, ell).d;
}

}  // namespace arbor::ecq
