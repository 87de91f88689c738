#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "halfline/errors.hpp"
#include "halfline/spectrum.hpp"
#include "oracles.hpp"

using namespace halfline;
using doctest::Approx;

namespace {

// Zero of w(i kappa) for V = c e^{-mu x} from the series oracle, by bisection.
double series_root(double c, double mu, double g, double a, double b) {
  auto f = [&](double k) { return oracle::exp_jost_w(c, mu, g, {0, k}).real(); };
  double fa = f(a);
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    if ((f(m) < 0) == (fa < 0)) a = m, fa = f(m);
    else b = m;
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("free operator") {
    const auto e = find_eigenvalues(Potential{}, -2.0);
    REQUIRE(e.count == 1);
    CHECK(e.kappas[0] == Approx(2.0).epsilon(1e-13));
    CHECK(e.lambdas[0] == Approx(-4.0).epsilon(1e-13));
    REQUIRE(e.h0_eigenvalue.has_value());
    CHECK(*e.h0_eigenvalue == -4.0);
    CHECK(find_eigenvalues(Potential{}, 1.0).count == 0);
  }

  TEST_CASE("finite-difference oracle, free operator") {
    double prev = 1e300;
    for (int n : {500, 1000, 2000}) {
      const auto ev = fd_negative_eigenvalues(Potential{}, -1.0, 40.0, n);
      REQUIRE(ev.size() == 1);
      CHECK(std::abs(ev[0] + 1.0) < prev);
      prev = std::abs(ev[0] + 1.0);
    }
    const auto r = fd_oracle(Potential{}, -1.0);
    CHECK(r.eigenvalues[0] == Approx(-1.0).epsilon(1e-7));
    CHECK(fd_oracle(Potential{}, 1.0).eigenvalues.empty());
    CHECK_THROWS_AS(fd_oracle(Potential{}, 1.0, 40.0, 100), SolverError);
  }

  TEST_CASE("exponential well against series and finite differences") {
    const auto v = make_exponential(-3, 2);
    const auto e = find_eigenvalues(v, 0.0);
    const auto fd = fd_oracle(v, 0.0);
    REQUIRE(e.count >= 1);
    REQUIRE(fd.eigenvalues.size() == static_cast<std::size_t>(e.count));
    for (int j = 0; j < e.count; ++j) {
      CHECK(std::abs(e.lambdas[j] / fd.eigenvalues[j] - 1) < 1e-6);
      const double k = series_root(-3, 2, 0.0, 0.5 * e.kappas[j], 1.5 * e.kappas[j]);
      CHECK(e.kappas[j] == Approx(k).epsilon(1e-11));
      CHECK(e.residuals[j] <= 1e-10 * (1 + e.kappas[j]));
    }
  }

  TEST_CASE("residual invariant across the potential catalog") {
    for (const char* spec : {"exp:1,1", "gauss:-2,1", "bump:-4,2", "sum:exp:-6,1+gauss:2,0.5"})
      for (double g : {-1.0, 0.0, 1.0}) {
        const auto v = parse_potential(spec);
        const auto e = find_eigenvalues(v, g);
        for (int j = 0; j < e.count; ++j) CHECK(e.residuals[j] <= 1e-10 * (1 + e.kappas[j]));
        CHECK(e.audit.violated == 0);
        CHECK(std::is_sorted(e.lambdas.begin(), e.lambdas.end()));
      }
  }

  TEST_CASE("Levinson counts, free operator") {
    const auto a = levinson_count(Potential{}, 1.0);
    CHECK(a.count == 0);
    CHECK(!a.resonant);
    CHECK(std::abs(a.shift) < 1e-14);
    const auto b = levinson_count(Potential{}, -1.0);
    CHECK(b.count == 1);
    CHECK(b.offset == -1.0);
    const auto c = levinson_count(Potential{}, 0.0);
    CHECK(c.resonant);
    CHECK(c.count == 0);
    CHECK(c.offset == 0.0);
  }

  TEST_CASE("Levinson count at the tuned resonance") {
    const double t = oracle::resonance_t();
    const auto v = make_exponential(-t * t / 4, 1);
    const auto r = levinson_count(v, 1.0);
    CHECK(r.resonant);
    CHECK(r.offset == 0.5);
    CHECK(r.distance < 1e-3);
    CHECK(r.count == find_eigenvalues(v, 1.0).count);
  }

  TEST_CASE("case offsets") {
    CHECK(levinson_offset(1.0, false) == 0.0);
    CHECK(levinson_offset(0.0, false) == -0.5);
    CHECK(levinson_offset(-1.0, false) == -1.0);
    CHECK(levinson_offset(1.0, true) == 0.5);
    CHECK(levinson_offset(0.0, true) == 0.0);
    CHECK(levinson_offset(-1.0, true) == -0.5);
    ResonanceReport amb;
    amb.ambiguous = true;
    CHECK_THROWS_AS(levinson_from(0.0, 1.0, amb), SolverError);
    ResonanceReport plain;
    CHECK_THROWS_AS(levinson_from(-0.3 * std::numbers::pi, 1.0, plain), SolverError);
  }

  TEST_CASE("monotone coupling") {
    // V = -c e^{-x}, gamma = 1: bound states enter through kappa = 0 as w(0) changes sign
    int prev_n = 0;
    double prev_w0 = 1.0;
    EigenOptions eo;
    eo.check_levinson = false;
    for (int i = 0; i <= 20; ++i) {
      const double c = 0.25 * i;
      const auto v = make_exponential(-c, 1);
      const auto e = find_eigenvalues(v, 1.0, eo);
      const double w0 = jost_w_zero(v, 1.0).w_at_zero;
      CHECK(e.count >= prev_n);
      const int crossings = (w0 < 0) != (prev_w0 < 0) ? 1 : 0;
      CHECK(e.count - prev_n == crossings);
      if (e.count > prev_n) CHECK(e.kappas.back() < 0.5);
      prev_n = e.count;
      prev_w0 = w0;
    }
    CHECK(prev_n >= 1);
  }

  TEST_CASE("weak decay is refused") {
    const auto v = make_exponential(-1, 1).with_decay_class(DecayClass::Integrable);
    CHECK_THROWS_AS(find_eigenvalues(v, 0.0), SolverError);
  }
}
