#include <doctest.h>

#include <cmath>
#include <vector>

#include "halfline/asymptotics.hpp"
#include "halfline/errors.hpp"
#include "halfline/jost_function.hpp"
#include "oracles.hpp"

using namespace halfline;
using doctest::Approx;

TEST_SUITE("asymptotics") {
  TEST_CASE("b sequence for the exponential") {
    const auto v = make_exponential(1, 1);
    const std::vector<double> xs = {0.0, 0.5, 2.0};
    const auto b = b_sequence(v, 4, xs);
    CHECK(b.at0[0] == 1.0);
    CHECK(b.at0[1] == Approx(-1.0).epsilon(1e-13));
    CHECK(b.at0[2] == Approx(-0.5).epsilon(1e-12));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(b.values[1][i] == Approx(-std::exp(-xs[i])).epsilon(1e-13));
      CHECK(b.derivs[1][i] == Approx(v(xs[i])).epsilon(1e-13));
    }
  }

  TEST_CASE("d and l coefficients") {
    const auto v = make_exponential(1, 1);
    const std::vector<double> x0 = {0.0};
    const auto b = b_sequence(v, 4, x0);
    const auto d = d_coeffs(b, 1.0);
    CHECK(d[0] == 1.0);
    CHECK(d[1] == Approx(-v.moments().integral));
    CHECK(d[2] == Approx(1.5).epsilon(1e-12));
    const auto l = ell_coeffs(d);
    CHECK(l[1] == Approx(d[1]));
    CHECK(l[2] == Approx(1.0).epsilon(1e-12));
    CHECK(l[2] == Approx(v(0)).epsilon(1e-12));

    const auto z = coefficient_ledger(Potential{}, 0.7, 4);
    for (int n = 1; n <= 4; ++n) CHECK(z.ell[n] == 0.0);
  }

  TEST_CASE("closed forms") {
    const auto c = ell_closed_forms(make_exponential(1, 1), 1.0);
    CHECK(c[1] == Approx(-1.0).epsilon(1e-14));
    CHECK(c[2] == Approx(1.0).epsilon(1e-14));
    CHECK(c[3] == Approx(5.5).epsilon(1e-13));
    CHECK(c[4] == Approx(11.0).epsilon(1e-13));
    const auto z = ell_closed_forms(Potential{}, 2.0);
    for (int n = 1; n <= 4; ++n) CHECK(z[n] == 0.0);
    // -3 e^{-2x}, gamma = 0: l1 = 3/2, l2 = -3
    const auto w = ell_closed_forms(make_exponential(-3, 2), 0.0);
    CHECK(w[1] == Approx(1.5).epsilon(1e-14));
    CHECK(w[2] == Approx(-3.0).epsilon(1e-14));
  }

  TEST_CASE("recurrence agrees with the closed forms") {
    for (const char* spec : {"exp:1,1", "exp:-3,2", "gauss:-2,1", "gauss:1,2", "bump:-4,2", "sum:exp:1,1+gauss:-2,1"})
      for (double g : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        const auto led = coefficient_ledger(parse_potential(spec), g, 4);
        for (int n = 1; n <= 4; ++n) CHECK(std::abs(led.ell[n] - led.ell_closed[n]) <= 1e-9 * std::max(1.0, std::abs(led.ell_closed[n])));
        CHECK(led.max_discrepancy <= 1e-9 * (1 + std::abs(led.ell_closed[4])));
      }
  }

  TEST_CASE("d_n is a polynomial of degree n-2 in gamma") {
    const auto v = make_gaussian(-2, 1);
    const std::vector<double> gs = {-2.0, -1.0, 0.0, 1.0, 2.0};
    for (int n = 2; n <= 4; ++n) {
      std::vector<double> dn;
      for (double g : gs) dn.push_back(coefficient_ledger(v, g, 4).d[n]);
      // the (n-1)-th finite difference on the equispaced gammas vanishes
      std::vector<double> diff = dn;
      for (int order = 0; order < n - 1; ++order)
        for (std::size_t i = 0; i + 1 < diff.size() - order; ++i) diff[i] = diff[i + 1] - diff[i];
      for (std::size_t i = 0; i + (n - 1) < gs.size(); ++i) CHECK(std::abs(diff[i]) < 1e-10);
    }
  }

  TEST_CASE("series evaluation") {
    const auto l = ell_closed_forms(make_exponential(1, 1), 1.0);
    CHECK(asymptotic_eta(10.0, l, 0).value == 0.0);
    CHECK(asymptotic_log_a(10.0, l, 0).value == 0.0);
    CHECK(asymptotic_eta(10.0, l, 1).value == Approx(0.05));
    CHECK(asymptotic_log_a(10.0, l, 1).value == Approx(-1.0 / 400));
    CHECK(std::isinf(asymptotic_eta(10.0, l, 2).truncation));  // l_5 is not in the closed forms
  }

  TEST_CASE("phase follows the series on [20, 200]") {
    const auto v = make_exponential(1, 1);
    const auto l = ell_closed_forms(v, 1.0);
    auto envelope = [&](int n) {
      std::vector<double> ks;
      for (int i = 0; i < n; ++i) ks.push_back(20.0 * std::pow(10.0, double(i) / (n - 1)));
      const auto t = phase_table(v, 1.0, ks);
      double ce = 0, ca = 0;
      for (std::size_t i = 0; i < ks.size(); ++i) {
        ce = std::max(ce, std::abs(t.eta_vals[i] - asymptotic_eta(ks[i], l, 2).value) * std::pow(ks[i], 5));
        ca = std::max(ca, std::abs(t.log_a[i] - asymptotic_log_a(ks[i], l, 2).value) * std::pow(ks[i], 6));
      }
      return std::pair{ce, ca};
    };
    const auto [c1, a1] = envelope(16);
    const auto [c2, a2] = envelope(31);
    CHECK(c2 == Approx(c1).epsilon(0.2));
    CHECK(a2 == Approx(a1).epsilon(0.2));
  }

  TEST_CASE("order gating and decay requirements") {
    const auto v = make_exponential(1, 1);
    const std::vector<double> x0 = {0.0};
    CHECK_THROWS_AS(b_sequence(v, 5, x0), SolverError);
    AsymptoticOptions ex;
    ex.experimental = true;
    CHECK(b_sequence(v, 6, x0, ex).at0.size() == 7);
    CHECK_THROWS_AS(b_sequence(v.with_decay_class(DecayClass::FirstMoment), 2, x0), SolverError);
  }
}
