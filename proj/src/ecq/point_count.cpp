#include "arbor/ecq/point_count.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace arbor::ecq {

int legendre(const PrimeField& k, std::uint64_t a) {
  a %= k.p();
  if (a == 0) return 0;
  return k.pow(a, (k.p() - 1) / 2) == 1 ? 1 : -1;
}

std::uint64_t sqrt_mod(const PrimeField& k, std::uint64_t a) {
  const std::uint64_t p = k.p();
  a %= p;
  if (a == 0) return 0;
  if (p % 4 == 3) return k.pow(a, (p + 1) / 4);
  std::uint64_t q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  std::uint64_t z = 2;
  while (legendre(k, z) != -1) ++z;
  std::uint64_t m = static_cast<std::uint64_t>(s), c = k.pow(z, q), t = k.pow(a, q), r = k.pow(a, (q + 1) / 2);
  while (t != 1) {
    std::uint64_t i = 0, t2 = t;
    while (t2 != 1) {
      t2 = k.mul(t2, t2);
      ++i;
    }
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + 1 < m - i; ++j) b = k.mul(b, b);
    m = i;
    c = k.mul(b, b);
    t = k.mul(t, c);
    r = k.mul(r, b);
  }
  return r;
}

namespace {

// Solutions y of y^2 + h y = f over F_p.
void solve_y(const CurveFp& E, std::uint64_t x, std::vector<std::uint64_t>& ys) {
  const PrimeField& k = E.field();
  ys.clear();
  const std::uint64_t h = E.linear_y_term(x), f = E.rhs(x);
  if (k.p() == 2) {
    for (std::uint64_t y = 0; y < 2; ++y)
      if (k.add(k.mul(y, y), k.mul(h, y)) == f) ys.push_back(y);
    return;
  }
  const std::uint64_t D = k.add(k.mul(h, h), k.mul(4, f));
  const int chi = legendre(k, D);
  if (chi < 0) return;
  const std::uint64_t half = k.inv(2), r = sqrt_mod(k, D);
  ys.push_back(k.mul(k.sub(r, h), half));
  if (chi > 0) ys.push_back(k.mul(k.sub(k.neg(r), h), half));
}

std::uint64_t count_by_enumeration(const CurveFp& E) {
  const PrimeField& k = E.field();
  const std::uint64_t p = k.p();
  std::uint64_t n = 1;
  if (p == 2) {
    std::vector<std::uint64_t> ys;
    for (std::uint64_t x = 0; x < p; ++x) {
      solve_y(E, x, ys);
      n += ys.size();
    }
    return n;
  }
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t h = E.linear_y_term(x);
    n += static_cast<std::uint64_t>(1 + legendre(k, k.add(k.mul(h, h), k.mul(4, E.rhs(x)))));
  }
  return n;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> f;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    f.push_back(q);
    while (n % q == 0) n /= q;
  }
  if (n > 1) f.push_back(n);
  return f;
}

std::uint64_t point_key(const PointFp& P, std::uint64_t p) { return P.infinity ? p * p : P.x * p + P.y; }

// Some k in [lo, hi] with k * P = O, by baby-step giant-step.
std::uint64_t annihilator_in_interval(const CurveFp& E, const PointFp& P, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t p = E.field().p();
  const std::uint64_t m = isqrt(hi - lo) + 1;
  std::unordered_map<std::uint64_t, std::uint64_t> baby;
  PointFp jP = PointFp::at_infinity();
  for (std::uint64_t j = 0; j < m; ++j) {
    baby.emplace(point_key(E.neg(jP), p), j);
    jP = E.add(jP, P);
  }
  const PointFp step = jP;  // m * P
  PointFp R = E.mul(P, static_cast<long>(lo));
  for (std::uint64_t base = lo; base <= hi; base += m) {
    auto it = baby.find(point_key(R, p));
    if (it != baby.end()) return base + it->second;
    R = E.add(R, step);
  }
  throw std::logic_error("no multiple of the point order in the Hasse interval");
}

CurveFp short_model(const CurveFp& E, std::uint64_t twist) {
  const PrimeField& k = E.field();
  const std::uint64_t b2 = E.b2(), b4 = E.b4(), b6 = E.b6();
  const std::uint64_t c4 = k.sub(k.mul(b2, b2), k.mul(24, b4));
  const std::uint64_t c6 = k.sub(k.add(k.neg(k.mul(b2, k.mul(b2, b2))), k.mul(36, k.mul(b2, b4))), k.mul(216, b6));
  const std::uint64_t d2 = k.mul(twist, twist), d3 = k.mul(d2, twist);
  return CurveFp(k, {0, 0, 0, k.mul(d2, k.neg(k.mul(27, c4))), k.mul(d3, k.neg(k.mul(54, c6)))});
}

std::uint64_t count_by_bsgs(const CurveFp& E) {
  const PrimeField& k = E.field();
  const std::uint64_t p = k.p();
  std::uint64_t nonresidue = 2;
  while (legendre(k, nonresidue) != -1) ++nonresidue;
  const CurveFp S = short_model(E, 1), T = short_model(E, nonresidue);
  const std::uint64_t w = isqrt(4 * p), lo = p + 1 - w, hi = p + 1 + w;
  std::mt19937_64 rng(p);
  std::uint64_t L = 1, Lt = 1;
  auto candidates = [&] {
    std::vector<std::uint64_t> c;
    for (std::uint64_t N = (lo + L - 1) / L * L; N <= hi; N += L)
      if ((2 * p + 2 - N) % Lt == 0) c.push_back(N);
    return c;
  };
  for (int iter = 0; iter < 24; ++iter) {
    PointFp P = random_point(S, rng);
    L = std::lcm(L, point_order(S, P, annihilator_in_interval(S, P, lo, hi)));
    auto c = candidates();
    if (c.size() == 1) return c[0];
    PointFp Q = random_point(T, rng);
    Lt = std::lcm(Lt, point_order(T, Q, annihilator_in_interval(T, Q, 2 * p + 2 - hi, 2 * p + 2 - lo)));
    c = candidates();
    if (c.size() == 1) return c[0];
  }
  return count_by_enumeration(E);
}

}  // namespace

std::vector<PointFp> enumerate_points(const CurveFp& E) {
  std::vector<PointFp> pts{PointFp::at_infinity()};
  std::vector<std::uint64_t> ys;
  for (std::uint64_t x = 0; x < E.field().p(); ++x) {
    solve_y(E, x, ys);
    for (auto y : ys) pts.push_back(PointFp::affine(x, y));
  }
  return pts;
}

PointFp random_point(const CurveFp& E, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, E.field().p() - 1);
  std::vector<std::uint64_t> ys;
  for (int tries = 0; tries < 1 << 20; ++tries) {
    const std::uint64_t x = dist(rng);
    solve_y(E, x, ys);
    if (!ys.empty()) return PointFp::affine(x, ys[rng() % ys.size()]);
  }
  throw std::logic_error("no affine point found");
}

std::uint64_t point_order(const CurveFp& E, const PointFp& P, std::uint64_t multiple) {
  std::uint64_t n = multiple;
  for (std::uint64_t q : prime_factors(multiple))
    while (n % q == 0 && E.mul(P, static_cast<long>(n / q)).infinity) n /= q;
  return n;
}

std::uint64_t group_order(const CurveFp& E) {
  const std::uint64_t p = E.field().p();
  const std::uint64_t N = p < kExhaustiveCountLimit ? count_by_enumeration(E) : count_by_bsgs(E);
  const std::uint64_t w = isqrt(4 * p);
  if (N + w < p + 1 || N > p + 1 + w) throw std::logic_error("group order outside the Hasse interval");
  return N;
}

bool order_coprime_to_ell(const CurveFp& E, const PointFp& P, std::uint64_t ell, std::uint64_t order) {
  while (order % ell == 0) order /= ell;
  return E.mul(P, static_cast<long>(order)).infinity;
}

bool order_coprime_to_ell(const CurveFp& E, const PointFp& P, std::uint64_t ell) {
  return order_coprime_to_ell(E, P, ell, group_order(E));
}

bool has_ell_power_preimage(const CurveFp& E, const PointFp& P, std::uint64_t ell) {
  const auto pts = enumerate_points(E);
  long le = 1;
  for (std::uint64_t N = pts.size(); N % ell == 0; N /= ell) le *= static_cast<long>(ell);
  for (const auto& beta : pts)
    if (E.mul(beta, le) == P) return true;
  return false;
}

bool divisibility_cross_check(const CurveFp& E, const PointFp& P, std::uint64_t ell) {
  if (E.field().p() >= kExhaustiveCountLimit)
    throw InputError("divisibility cross-check needs p < " + std::to_string(kExhaustiveCountLimit));
  return has_ell_power_preimage(E, P, ell) == order_coprime_to_ell(E, P, ell);
}

}  // namespace arbor::ecq
