#pragma once

// Long Weierstrass curves y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over
// Q (exact rationals) and F_p, sharing one templated chord-tangent law.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "arbor/errors.hpp"

namespace arbor::ecq {

struct RationalField {
  using Element = mpq_class;
  Element zero() const { return 0; }
  Element one() const { return 1; }
  Element from_int(long v) const { return v; }
  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element neg(const Element& a) const { return -a; }
  Element div(const Element& a, const Element& b) const { return a / b; }
  bool is_zero(const Element& a) const { return sgn(a) == 0; }
  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

/// F_p for p < 2^32.
class PrimeField {
 public:
  using Element = std::uint64_t;
  explicit PrimeField(std::uint64_t p) : p_(p) {}
  std::uint64_t p() const { return p_; }
  Element zero() const { return 0; }
  Element one() const { return 1 % p_; }
  Element from_int(long v) const {
    long r = v % static_cast<long>(p_);
    return static_cast<Element>(r < 0 ? r + static_cast<long>(p_) : r);
  }
  Element add(Element a, Element b) const { return (a + b) % p_; }
  Element sub(Element a, Element b) const { return (a + p_ - b) % p_; }
  Element mul(Element a, Element b) const { return a * b % p_; }
  Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element pow(Element a, std::uint64_t e) const;
  bool is_zero(Element a) const { return a == 0; }
  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint64_t p_;
};

template <class Field>
struct Point {
  using Element = typename Field::Element;
  Element x{}, y{};
  bool infinity = true;

  static Point at_infinity() { return {}; }
  static Point affine(Element x_, Element y_) { return {std::move(x_), std::move(y_), false}; }
  bool is_infinity() const { return infinity; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.x == b.x && a.y == b.y;
  }
};

template <class Field>
class Curve {
 public:
  using Element = typename Field::Element;
  using P = Point<Field>;

  /// Throws InputError when the discriminant vanishes.
  Curve(Field k, std::array<Element, 5> a) : k_(std::move(k)), a_(std::move(a)) {
    if (k_.is_zero(discriminant())) throw InputError("singular curve: discriminant is zero");
  }

  const Field& field() const { return k_; }
  const std::array<Element, 5>& coefficients() const { return a_; }
  const Element& a1() const { return a_[0]; }
  const Element& a2() const { return a_[1]; }
  const Element& a3() const { return a_[2]; }
  const Element& a4() const { return a_[3]; }
  const Element& a6() const { return a_[4]; }

  Element b2() const { return k_.add(k_.mul(a1(), a1()), k_.mul(k_.from_int(4), a2())); }
  Element b4() const { return k_.add(k_.mul(k_.from_int(2), a4()), k_.mul(a1(), a3())); }
  Element b6() const { return k_.add(k_.mul(a3(), a3()), k_.mul(k_.from_int(4), a6())); }
  Element b8() const {
    // a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2
    Element t = k_.mul(k_.mul(a1(), a1()), a6());
    t = k_.add(t, k_.mul(k_.from_int(4), k_.mul(a2(), a6())));
    t = k_.sub(t, k_.mul(k_.mul(a1(), a3()), a4()));
    t = k_.add(t, k_.mul(a2(), k_.mul(a3(), a3())));
    return k_.sub(t, k_.mul(a4(), a4()));
  }
  Element discriminant() const {
    const Element B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    // -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
    Element t = k_.neg(k_.mul(k_.mul(B2, B2), B8));
    t = k_.sub(t, k_.mul(k_.from_int(8), k_.mul(B4, k_.mul(B4, B4))));
    t = k_.sub(t, k_.mul(k_.from_int(27), k_.mul(B6, B6)));
    return k_.add(t, k_.mul(k_.from_int(9), k_.mul(B2, k_.mul(B4, B6))));
  }

  /// x^3 + a2 x^2 + a4 x + a6.
  Element rhs(const Element& x) const {
    return k_.add(k_.mul(k_.add(k_.mul(k_.add(x, a2()), x), a4()), x), a6());
  }
  /// a1 x + a3.
  Element linear_y_term(const Element& x) const { return k_.add(k_.mul(a1(), x), a3()); }

  bool contains(const P& p) const {
    if (p.infinity) return true;
    Element lhs = k_.add(k_.mul(p.y, p.y), k_.mul(linear_y_term(p.x), p.y));
    return lhs == rhs(p.x);
  }

  P neg(const P& p) const {
    if (p.infinity) return p;
    return P::affine(p.x, k_.sub(k_.neg(p.y), linear_y_term(p.x)));
  }

  P add(const P& p, const P& q) const {
    if (p.infinity) return q;
    if (q.infinity) return p;
    Element lambda, nu;
    if (p.x == q.x) {
      Element s = k_.add(k_.add(p.y, q.y), linear_y_term(q.x));
      if (k_.is_zero(s)) return P::at_infinity();
      // tangent: (3x^2 + 2 a2 x + a4 - a1 y) / (2y + a1 x + a3)
      Element den = k_.add(k_.add(p.y, p.y), linear_y_term(p.x));
      Element x2 = k_.mul(p.x, p.x);
      Element num = k_.add(k_.add(k_.mul(k_.from_int(3), x2), k_.mul(k_.mul(k_.from_int(2), a2()), p.x)), a4());
      num = k_.sub(num, k_.mul(a1(), p.y));
      lambda = k_.div(num, den);
      Element nnum = k_.add(k_.sub(k_.mul(a4(), p.x), k_.mul(x2, p.x)), k_.mul(k_.from_int(2), a6()));
      nnum = k_.sub(nnum, k_.mul(a3(), p.y));
      nu = k_.div(nnum, den);
    } else {
      Element dx = k_.sub(q.x, p.x);
      lambda = k_.div(k_.sub(q.y, p.y), dx);
      nu = k_.div(k_.sub(k_.mul(p.y, q.x), k_.mul(q.y, p.x)), dx);
    }
    Element x3 = k_.sub(k_.sub(k_.sub(k_.add(k_.mul(lambda, lambda), k_.mul(a1(), lambda)), a2()), p.x), q.x);
    Element y3 = k_.sub(k_.sub(k_.neg(k_.mul(k_.add(lambda, a1()), x3)), nu), a3());
    return P::affine(std::move(x3), std::move(y3));
  }

  P sub(const P& p, const P& q) const { return add(p, neg(q)); }

  /// n * p for any integer n (double and add).
  P mul(const P& p, const mpz_class& n) const {
    if (sgn(n) < 0) return mul(neg(p), -n);
    P acc = P::at_infinity(), base = p;
    mpz_class e = n;
    while (sgn(e) > 0) {
      if (mpz_odd_p(e.get_mpz_t())) acc = add(acc, base);
      e >>= 1;
      if (sgn(e) > 0) base = add(base, base);
    }
    return acc;
  }
  P mul(const P& p, long n) const {
    if (n < 0) return mul(neg(p), -n);
    P acc = P::at_infinity(), base = p;
    for (auto e = static_cast<unsigned long>(n); e; e >>= 1) {
      if (e & 1) acc = add(acc, base);
      if (e > 1) base = add(base, base);
    }
    return acc;
  }

 private:
  Field k_;
  std::array<Element, 5> a_;
};

using CurveQ = Curve<RationalField>;
using PointQ = Point<RationalField>;
using CurveFp = Curve<PrimeField>;
using PointFp = Point<PrimeField>;

inline CurveQ make_curve_q(std::array<mpq_class, 5> a) { return CurveQ(RationalField{}, std::move(a)); }

/// Throws InputError if the point does not lie on the curve.
PointQ make_point_q(const CurveQ& E, mpq_class x, mpq_class y);

enum class ReductionStatus { good, bad_reduction, denominator };

class ReductionError : public InputError {
 public:
  ReductionError(ReductionStatus s, const std::string& what) : InputError(what), status_(s) {}
  ReductionStatus status() const { return status_; }

 private:
  ReductionStatus status_;
};

struct Reduction {
  CurveFp curve;
  PointFp point;
};

/// Reduces the curve and point mod p; status instead of exceptions.
ReductionStatus try_reduce_mod_p(const CurveQ& E, const PointQ& P, std::uint64_t p, std::optional<Reduction>& out);
/// Same, throwing ReductionError on bad reduction or a p-divisible denominator.
Reduction reduce_mod_p(const CurveQ& E, const PointQ& P, std::uint64_t p);

/// Smallest n <= 12 with n * P = O, or nullopt (torsion orders over Q are at most 12).
std::optional<int> torsion_order(const CurveQ& E, const PointQ& P);

std::string to_string(const PointQ& P);
std::string to_string(const CurveQ& E);

}  // namespace arbor::ecq
