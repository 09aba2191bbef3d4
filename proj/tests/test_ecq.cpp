#include <doctest.h>

#include <cmath>
#include <random>

#include "arbor/density.hpp"
#include "arbor/ecq/curve.hpp"
#include "arbor/ecq/point_count.hpp"
#include "arbor/ecq/scan.hpp"

using namespace arbor;
using namespace arbor::ecq;

namespace {

CurveQ curve_37a() { return make_curve_q({0, 0, 1, -1, 0}); }
CurveQ curve_x2a() { return make_curve_q({0, 0, 0, -343, 2401}); }

std::uint64_t brute_count(const CurveFp& E) {
  const std::uint64_t p = E.field().p();
  std::uint64_t n = 1;
  for (std::uint64_t x = 0; x < p; ++x)
    for (std::uint64_t y = 0; y < p; ++y)
      if (E.contains(PointFp::affine(x, y))) ++n;
  return n;
}

}  // namespace

TEST_CASE("b-invariants and discriminant of 37a") {
  auto E = curve_37a();
  CHECK(E.b2() == 0);
  CHECK(E.b4() == -2);
  CHECK(E.b6() == 1);
  CHECK(E.b8() == -1);
  CHECK(E.discriminant() == 37);
  CHECK(4 * E.b8() == E.b2() * E.b6() - E.b4() * E.b4());
  CHECK_THROWS_AS(make_curve_q({0, 0, 0, 0, 0}), InputError);
}

TEST_CASE("group law over Q") {
  auto E = curve_37a();
  auto P = make_point_q(E, 0, 0);
  auto O = PointQ::at_infinity();
  CHECK(E.add(P, O) == P);
  CHECK(E.add(O, P) == P);
  CHECK(E.neg(P) == make_point_q(E, 0, -1));
  CHECK(E.add(P, make_point_q(E, 0, -1)).infinity);
  auto P2 = E.add(P, P);
  CHECK(E.contains(P2));
  CHECK(P2 == make_point_q(E, 1, 0));
  CHECK(E.add(P2, P2) == E.mul(P, 4L));
  CHECK(E.mul(P, 6L) == make_point_q(E, 6, 14));
  CHECK(E.mul(P, -3L) == E.neg(E.mul(P, 3L)));
  CHECK(E.mul(P, mpz_class(7)) == E.mul(P, 7L));
  CHECK_THROWS_AS(make_point_q(E, 1, 1), InputError);
  // associativity and commutativity on multiples
  for (long a = -4; a <= 4; ++a)
    for (long b = -4; b <= 4; ++b) {
      auto A = E.mul(P, a), B = E.mul(P, b);
      CHECK(E.add(A, B) == E.mul(P, a + b));
      CHECK(E.add(A, B) == E.add(B, A));
      CHECK(E.add(E.add(A, B), P2) == E.add(A, E.add(B, P2)));
    }
  CHECK(!torsion_order(E, P));
  auto T = make_curve_q({0, 0, 0, -1, 0});
  CHECK(torsion_order(T, make_point_q(T, 0, 0)) == 2);
  CHECK(torsion_order(T, PointQ::at_infinity()) == 1);
}

TEST_CASE("reduction mod p") {
  auto E = curve_37a();
  auto P = make_point_q(E, 0, 0);
  auto r2 = reduce_mod_p(E, P, 2);
  CHECK(r2.point == PointFp::affine(0, 0));
  CHECK(group_order(r2.curve) == 5);
  CHECK(group_order(reduce_mod_p(E, P, 3).curve) == 7);
  try {
    reduce_mod_p(E, P, 37);
    FAIL("expected bad reduction");
  } catch (const ReductionError& e) {
    CHECK(e.status() == ReductionStatus::bad_reduction);
  }
  auto F = make_curve_q({0, 0, 0, mpq_class(1, 5), 0});
  try {
    reduce_mod_p(F, PointQ::at_infinity(), 5);
    FAIL("expected denominator error");
  } catch (const ReductionError& e) {
    CHECK(e.status() == ReductionStatus::denominator);
  }
  auto G = curve_x2a();
  std::optional<Reduction> red;
  CHECK(try_reduce_mod_p(G, make_point_q(G, 0, -49), 2, red) == ReductionStatus::bad_reduction);
  CHECK(try_reduce_mod_p(G, make_point_q(G, 0, -49), 5, red) == ReductionStatus::good);
  CHECK(red->point == PointFp::affine(0, 1));
}

TEST_CASE("enumeration counts match brute force for small p") {
  for (auto E : {curve_37a(), curve_x2a()})
    for (std::uint64_t p : primes_up_to(200)) {
      std::optional<Reduction> red;
      if (try_reduce_mod_p(E, PointQ::at_infinity(), p, red) != ReductionStatus::good) continue;
      CAPTURE(p);
      CHECK(group_order(red->curve) == brute_count(red->curve));
      CHECK(enumerate_points(red->curve).size() == group_order(red->curve));
    }
}

TEST_CASE("BSGS counts agree with enumeration and satisfy Hasse") {
  auto E = curve_37a();
  int checked = 0;
  for (std::uint64_t p : primes_up_to(6000)) {
    if (p < kExhaustiveCountLimit || p % 7 != 1) continue;
    auto red = reduce_mod_p(E, PointQ::at_infinity(), p);
    const std::uint64_t N = group_order(red.curve);
    CHECK(N == enumerate_points(red.curve).size());
    CHECK(std::abs(static_cast<double>(N) - static_cast<double>(p) - 1) <= 2 * std::sqrt(static_cast<double>(p)));
    std::mt19937_64 rng(p);
    for (int s = 0; s < 20; ++s) CHECK(red.curve.mul(random_point(red.curve, rng), static_cast<long>(N)).infinity);
    ++checked;
  }
  CHECK(checked > 50);
  // a few larger primes: Hasse and annihilation only
  for (std::uint64_t p : {1000003ULL, 2147483647ULL}) {
    auto red = reduce_mod_p(E, PointQ::at_infinity(), p);
    const std::uint64_t N = group_order(red.curve);
    CHECK(std::abs(static_cast<double>(N) - static_cast<double>(p) - 1) <= 2 * std::sqrt(static_cast<double>(p)));
    std::mt19937_64 rng(1);
    for (int s = 0; s < 20; ++s) CHECK(red.curve.mul(random_point(red.curve, rng), static_cast<long>(N)).infinity);
  }
}

TEST_CASE("tonelli-shanks") {
  for (std::uint64_t p : {5ULL, 13ULL, 17ULL, 97ULL, 7681ULL}) {
    PrimeField k(p);
    for (std::uint64_t a = 1; a < std::min<std::uint64_t>(p, 200); ++a) {
      if (legendre(k, a) != 1) continue;
      auto r = sqrt_mod(k, a);
      CHECK(k.mul(r, r) == a);
    }
  }
}

TEST_CASE("order coprime to ell") {
  auto E = curve_37a();
  auto r2 = reduce_mod_p(E, make_point_q(E, 0, 0), 2);
  CHECK(order_coprime_to_ell(r2.curve, PointFp::at_infinity(), 2));
  CHECK(order_coprime_to_ell(r2.curve, r2.point, 2));
  CHECK(divisibility_cross_check(r2.curve, r2.point, 2));
  CHECK(has_ell_power_preimage(r2.curve, r2.point, 2));
  // points of exact order l are never l-coprime
  std::mt19937_64 rng(3);
  for (std::uint64_t ell : {2, 3})
    for (std::uint64_t p : primes_up_to(400)) {
      std::optional<Reduction> red;
      if (try_reduce_mod_p(E, PointQ::at_infinity(), p, red) != ReductionStatus::good) continue;
      const std::uint64_t N = group_order(red->curve);
      if (N % ell) continue;
      for (int t = 0; t < 5; ++t) {
        auto Q = red->curve.mul(random_point(red->curve, rng), static_cast<long>(N / ell));
        if (Q.infinity) continue;
        CHECK(!order_coprime_to_ell(red->curve, Q, ell));
        CHECK(!has_ell_power_preimage(red->curve, Q, ell));
      }
    }
  auto T = make_curve_q({0, 0, 0, -1, 0});
  auto rt = reduce_mod_p(T, make_point_q(T, 0, 0), 5);
  CHECK(!order_coprime_to_ell(rt.curve, rt.point, 2));
  CHECK(divisibility_cross_check(rt.curve, rt.point, 2));
  CHECK_THROWS_AS(divisibility_cross_check(reduce_mod_p(E, PointQ::at_infinity(), 1009).curve, PointFp::at_infinity(), 2),
                  InputError);
}

TEST_CASE("order criterion matches enumeration at every good prime below 1000") {
  for (auto [E, x, y] : {std::tuple{curve_37a(), 0, 0}, std::tuple{curve_x2a(), 0, -49}}) {
    auto P = make_point_q(E, x, y);
    for (std::uint64_t ell : {2, 3})
      for (std::uint64_t p : primes_up_to(999)) {
        std::optional<Reduction> red;
        if (try_reduce_mod_p(E, P, p, red) != ReductionStatus::good) continue;
        CAPTURE(p);
        CHECK(divisibility_cross_check(red->curve, red->point, ell));
      }
  }
}

TEST_CASE("density scan") {
  auto E = curve_37a();
  auto P = make_point_q(E, 0, 0);
  auto r = density_scan(E, P, 2, 1000);
  CHECK(r.good + r.skipped == primes_up_to(1000).size());
  CHECK(r.skipped == 1);  // p = 37
  CHECK(r.fraction == mpq_class(static_cast<unsigned long>(r.coprime), static_cast<unsigned long>(r.good)));
  CHECK(r.fraction >= 0);
  CHECK(r.fraction <= 1);
  ScanOptions opts;
  opts.threads = 5;
  opts.keep_records = true;
  opts.verify_samples = 3;
  auto r5 = density_scan(E, P, 2, 1000, opts);
  CHECK(r5.fraction == r.fraction);
  CHECK(r5.records.size() == primes_up_to(1000).size());
  CHECK(r5.records[0].prime == 2);
  CHECK(r5.records[0].good);
  CHECK(r5.records[0].coprime_order);  // order 5 at p = 2
  r5.records.clear();
  CHECK(r5 == r);
  auto big = density_scan(E, P, 2, 20000, {4, false, 0});
  // trend toward 11/21, reported rather than asserted pointwise
  MESSAGE("X = 1000: " << r.fraction.get_d() << ", X = 20000: " << big.fraction.get_d()
                       << ", limit " << surjective_density(2).get_d());
  CHECK(std::abs(big.fraction.get_d() - 11.0 / 21) < 0.05);
}

TEST_CASE("density scan errors") {
  auto E = curve_37a();
  auto P = make_point_q(E, 0, 0);
  CHECK_THROWS_AS(density_scan(E, P, 2, 1), EmptyResultError);
  CHECK_THROWS_AS(density_scan(E, P, 4, 100), InputError);
  auto T = make_curve_q({0, 0, 0, -1, 0});
  CHECK_THROWS_AS(density_scan(T, make_point_q(T, 0, 0), 2, 100), InputError);
  auto G = curve_x2a();
  auto r = density_scan(G, make_point_q(G, 0, -49), 2, 3000);
  MESSAGE("X_2a-type curve, X = 3000: " << r.fraction.get_d());
  CHECK(r.good > 0);
}
