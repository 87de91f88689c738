#include <doctest.h>

#include <cmath>
#include <numbers>

#include "halfline/errors.hpp"
#include "halfline/potential.hpp"
#include "oracles.hpp"

using namespace halfline;
using doctest::Approx;

namespace {

double quad_tail(const Potential& v, double x, double len) {
  return oracle::gauss_legendre([&](double y) { return std::abs(v(y)); }, x, x + len, 4000);
}

}  // namespace

TEST_SUITE("potential") {
  TEST_CASE("exponential closed forms") {
    const auto v = make_exponential(1, 1);
    CHECK(v.moments().integral == Approx(1.0).epsilon(1e-13));
    CHECK(v(0) == 1.0);
    CHECK(v.eval(0, 1) == Approx(-1.0));
    CHECK(v.moments().integral_sq == Approx(0.5).epsilon(1e-13));

    const auto z = make_exponential(0, 1);
    CHECK(z.is_zero());
    CHECK(z.moments().integral == 0.0);
    CHECK(z.moments().integral_sq == 0.0);

    const auto w = make_exponential(-3, 2);
    CHECK(w.moments().integral == Approx(-1.5).epsilon(1e-13));
    for (double x : {0.0, 0.5, 2.0, 7.0}) CHECK(w.tail_abs(x) == Approx(1.5 * std::exp(-2 * x)).epsilon(1e-12));
  }

  TEST_CASE("gaussian closed forms") {
    const auto g = make_gaussian(1, 1);
    CHECK(g(0) == 1.0);
    CHECK(std::abs(g.eval(0, 1)) < 1e-15);
    CHECK(g.eval(0, 2) == Approx(-2.0));
    CHECK(make_gaussian(2, 1).moments().integral == Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));

    const auto g2 = make_gaussian(1, 2);
    const double q = quad_tail(g2, 4.0, 40.0);
    CHECK(q <= g2.tail_abs(4.0) + 1e-12);
    CHECK(g2.tail_abs(4.0) <= std::exp(-4.0) * 2.0 * std::sqrt(std::numbers::pi) / 2.0 + 1e-15);
  }

  TEST_CASE("compact bump support") {
    const auto b = make_compact_bump(1, 2);
    CHECK(b.eval(3, 0) == 0.0);
    CHECK(b.tail_abs(2) == 0.0);
    CHECK(b(0) == Approx(1.0));
    const auto b5 = make_compact_bump(5, 1);
    const double inside = oracle::gauss_legendre([&](double y) { return std::abs(b5(y)); }, 0.0, 1.0, 2000);
    const double all = oracle::gauss_legendre([&](double y) { return std::abs(b5(y)); }, 0.0, 30.0, 6000);
    CHECK(all == Approx(inside).epsilon(1e-9));
    CHECK(b5.moments().integral == Approx(inside).epsilon(1e-9));
    CHECK(b5.tail_abs(0) >= inside);
    CHECK(b5.tail_abs(1) == 0.0);
  }

  TEST_CASE("scale and sum") {
    const auto e = make_exponential(1, 1);
    CHECK(scale(e, 0).is_zero());
    for (double x : {0.0, 0.3, 2.0}) CHECK(scale(e, 1)(x) == e(x));
    CHECK(scale(e, -3).moments().integral == Approx(-3.0).epsilon(1e-13));
    const auto s = sum(e, make_gaussian(2, 1));
    CHECK(s(0.7) == Approx(e(0.7) + 2 * std::exp(-0.49)));
  }

  TEST_CASE("grammar") {
    CHECK(parse_potential("exp:1,1")(0.5) == Approx(std::exp(-0.5)));
    CHECK(parse_potential("EXP:1e0,1.0")(0.5) == Approx(std::exp(-0.5)));
    CHECK(parse_potential("scale:-3*exp:1,2")(0) == Approx(-3.0));
    CHECK(parse_potential("sum:exp:1,1+gauss:2,1")(0) == Approx(3.0));
    CHECK(parse_potential("bump:-4,2")(0) == Approx(-4.0));
    for (const char* bad : {"", "exp:1", "exp:1,-1", "cubic:1,1", "scale:x*exp:1,1", "exp:1,1,1"})
      CHECK_THROWS_AS(parse_potential(bad), SolverError);
    // canonical spec round-trips
    const auto v = parse_potential("sum:exp:1,1+scale:2*gauss:1,1");
    CHECK(parse_potential(v.spec())(0.3) == Approx(v(0.3)).epsilon(1e-15));
  }

  TEST_CASE("tail bounds dominate quadrature and decrease") {
    for (const char* spec : {"exp:1,1", "exp:-3,2", "gauss:-2,1", "bump:-4,2", "sum:exp:1,1+gauss:-2,1"}) {
      const auto v = parse_potential(spec);
      double prev = v.tail_abs(0);
      for (double x : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        CHECK(quad_tail(v, x, 60.0) <= v.tail_abs(x) + 1e-12);
        CHECK(v.tail_abs(x) <= prev);
        prev = v.tail_abs(x);
        const double qm =
            oracle::gauss_legendre([&](double y) { return y * std::abs(v(y)); }, x, x + 60.0, 4000);
        CHECK(qm <= v.tail_abs_moment(x) + 1e-12);
      }
      CHECK(v.tail_abs(60.0) < 1e-20);
    }
  }

  TEST_CASE("moments agree with quadrature") {
    for (const char* spec : {"exp:1,1", "exp:-3,2", "gauss:-2,1", "gauss:1,2"}) {
      const auto v = parse_potential(spec);
      const double q = oracle::gauss_legendre([&](double y) { return v(y); }, 0.0, 60.0, 4000);
      const double q2 = oracle::gauss_legendre([&](double y) { return v(y) * v(y); }, 0.0, 60.0, 4000);
      CHECK(std::abs(v.moments().integral - q) < 1e-12);
      CHECK(std::abs(v.moments().integral_sq - q2) < 1e-12);
    }
  }

  TEST_CASE("derivatives match finite differences of the values") {
    for (const char* spec : {"exp:1,1", "gauss:-2,1", "bump:-4,2"}) {
      const auto v = parse_potential(spec);
      for (double x : {0.2, 0.9, 1.5}) {
        const double h = 1e-4;
        const double fd = (v(x + h) - v(x - h)) / (2 * h);
        CHECK(v.eval(x, 1) == Approx(fd).epsilon(1e-6));
        const double fd2 = (v.eval(x + h, 1) - v.eval(x - h, 1)) / (2 * h);
        CHECK(v.eval(x, 2) == Approx(fd2).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("decay classes are ordered and honest") {
    CHECK(DecayClass::SmoothRapid > DecayClass::FirstMoment);
    CHECK(DecayClass::FirstMoment > DecayClass::Integrable);
    const auto v = make_exponential(1, 1);
    CHECK(v.decay_class() == DecayClass::SmoothRapid);
    CHECK(v.with_decay_class(DecayClass::Integrable).decay_class() == DecayClass::Integrable);
    CHECK_THROWS_AS(v.with_decay_class(DecayClass::Integrable).with_decay_class(DecayClass::SmoothRapid),
                    SolverError);
    // finite first moment: quadrature on [0, 40] plus the tail bound
    const double m = oracle::gauss_legendre([&](double y) { return (1 + y) * std::abs(v(y)); }, 0, 40, 2000);
    CHECK(std::isfinite(m + v.tail_abs(40) + v.tail_abs_moment(40)));
  }
}
