#include "arbor/ecq/curve.hpp"

namespace arbor::ecq {

PrimeField::Element PrimeField::inv(Element a) const {
  std::int64_t r0 = static_cast<std::int64_t>(p_), r1 = static_cast<std::int64_t>(a % p_);
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) throw std::domain_error("division by zero in F_p");
  return from_int(static_cast<long>(s0));
}

PrimeField::Element PrimeField::pow(Element a, std::uint64_t e) const {
  Element r = one(), b = a % p_;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

PointQ make_point_q(const CurveQ& E, mpq_class x, mpq_class y) {
  PointQ P = PointQ::affine(std::move(x), std::move(y));
  if (!E.contains(P)) throw InputError("point " + to_string(P) + " is not on the curve");
  return P;
}

namespace {

// num/den mod p, or nullopt if p divides den.
std::optional<std::uint64_t> reduce_q(const mpq_class& v, std::uint64_t p) {
  unsigned long d = mpz_fdiv_ui(v.get_den_mpz_t(), p);
  if (d == 0) return std::nullopt;
  unsigned long n = mpz_fdiv_ui(v.get_num_mpz_t(), p);
  PrimeField k(p);
  return k.div(n, d);
}

}  // namespace

ReductionStatus try_reduce_mod_p(const CurveQ& E, const PointQ& P, std::uint64_t p, std::optional<Reduction>& out) {
  out.reset();
  std::array<std::uint64_t, 5> a{};
  for (std::size_t i = 0; i < 5; ++i) {
    auto r = reduce_q(E.coefficients()[i], p);
    if (!r) return ReductionStatus::denominator;
    a[i] = *r;
  }
  PrimeField k(p);
  auto disc = reduce_q(E.discriminant(), p);
  if (!disc || *disc == 0) return ReductionStatus::bad_reduction;
  PointFp Q = PointFp::at_infinity();
  if (!P.infinity) {
    auto x = reduce_q(P.x, p), y = reduce_q(P.y, p);
    if (!x || !y) return ReductionStatus::denominator;
    Q = PointFp::affine(*x, *y);
  }
  out.emplace(Reduction{CurveFp(k, a), Q});
  return ReductionStatus::good;
}

Reduction reduce_mod_p(const CurveQ& E, const PointQ& P, std::uint64_t p) {
  std::optional<Reduction> out;
  switch (try_reduce_mod_p(E, P, p, out)) {
    case ReductionStatus::good:
      return *out;
    case ReductionStatus::bad_reduction:
      throw ReductionError(ReductionStatus::bad_reduction, "bad reduction at p = " + std::to_string(p));
    case ReductionStatus::denominator:
      break;
  }
  throw ReductionError(ReductionStatus::denominator, "p = " + std::to_string(p) + " divides a denominator");
}

std::optional<int> torsion_order(const CurveQ& E, const PointQ& P) {
  PointQ acc = P;
  for (int n = 1; n <= 12; ++n) {
    if (acc.infinity) return n;
    acc = E.add(acc, P);
  }
  return std::nullopt;
}

std::string to_string(const PointQ& P) {
  if (P.infinity) return "O";
  return "(" + P.x.get_str() + ", " + P.y.get_str() + ")";
}

namespace {

// " + c*mono" with sign folded in; empty for c = 0.
std::string term(const mpq_class& c, const std::string& mono) {
  if (sgn(c) == 0) return "";
  std::string out = sgn(c) < 0 ? " - " : " + ";
  const mpq_class a = abs(c);
  if (mono.empty()) return out + a.get_str();
  if (a != 1) out += a.get_str() + (a.get_den() == 1 ? "" : " ");
  return out + mono;
}

}  // namespace

std::string to_string(const CurveQ& E) {
  std::string s = "y^2" + term(E.a1(), "xy") + term(E.a3(), "y") + " = x^3" + term(E.a2(), "x^2") +
                  term(E.a4(), "x") + term(E.a6(), "");
  return s;
}

}  // namespace arbor::ecq
