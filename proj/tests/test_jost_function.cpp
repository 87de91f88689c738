#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "halfline/asymptotics.hpp"
#include "halfline/errors.hpp"
#include "halfline/jost_function.hpp"
#include "oracles.hpp"

using namespace halfline;
using doctest::Approx;

namespace {

const cplx I{0, 1};

JostEvaluation W(const Potential& v, double g, cplx z, bool cross = true) {
  JostOptions o;
  o.cross_check = cross;
  return jost_w(v, g, SpectralPoint::from_zeta(z), o);
}

// Largest |D - 1| |zeta| over a ray sample on |zeta| in [10, 1e4].
double ray_constant(const Potential& v, double g, double angle, int n) {
  double c = 0;
  for (int i = 0; i < n; ++i) {
    const double r = 10.0 * std::pow(1e3, double(i) / (n - 1));
    const auto e = W(v, g, std::polar(r, angle), false);
    c = std::max(c, std::abs(e.D_minus_one) * r);
  }
  return c;
}

}  // namespace

TEST_SUITE("jost_function") {
  TEST_CASE("free Jost function") {
    const Potential zero;
    for (double g : {-2.0, 0.0, 1.5})
      for (int i = 0; i < 20; ++i) {
        const cplx z = std::polar(0.1 + 0.7 * i, 0.15 * i);
        const auto e = W(zero, g, z);
        CHECK(std::abs(e.w - (g - I * z)) < 1e-12);
        CHECK(std::abs(e.D_minus_one) < 1e-14);
      }
    CHECK(std::abs(W(zero, -2.0, 2.0 * I).w) < 1e-14);
  }

  TEST_CASE("two representations agree") {
    const auto e = W(make_exponential(-3, 2), 0.0, I);
    REQUIRE(e.w_integral_rep.has_value());
    CHECK(std::abs(e.w - *e.w_integral_rep) < 1e-8);
    CHECK(e.discrepancy < 1e-8);
  }

  TEST_CASE("exponential oracle, estimated errors are honest") {
    for (auto [c, mu] : {std::pair{1.0, 1.0}, std::pair{-3.0, 2.0}})
      for (double g : {-1.0, 0.0, 1.0})
        for (cplx z : {cplx(0.05), cplx(0.4), cplx(1.3), cplx(12.0), cplx(0.5, 0.5), cplx(0, 0.3), cplx(0, 2.5),
                       cplx(-2.0, 0.1), cplx(150.0)}) {
          const auto v = make_exponential(c, mu);
          const auto e = W(v, g, z);
          const cplx ref = oracle::exp_jost_w(c, mu, g, z);
          CHECK(std::abs(e.w - ref) <= e.est_error + 1e-14);
          CHECK(e.audit.violated == 0);
        }
  }

  TEST_CASE("zeta derivative") {
    const double c = 1.0, mu = 1.0, g = 1.0;
    const auto v = make_exponential(c, mu);
    for (cplx z : {cplx(0, 0.7), cplx(1.0, 0.5), cplx(2.0), cplx(0.3)}) {
      const auto e = W(v, g, z);
      const double h = 1e-5;
      const cplx fd = (oracle::exp_jost_w(c, mu, g, z + h) - oracle::exp_jost_w(c, mu, g, z - h)) / (2 * h);
      CHECK(std::abs(e.w_dot - fd) < 1e-7);
    }
  }

  TEST_CASE("zero energy") {
    const Potential zero;
    for (double g : {-1.0, 0.0, 2.0}) {
      const auto r = jost_w_zero(zero, g);
      CHECK(r.w_at_zero == Approx(g));
      CHECK(r.is_resonant == (g == 0.0));
    }
    const auto r0 = jost_w_zero(zero, 0.0);
    REQUIRE(r0.w0_slope.has_value());
    CHECK(*r0.w0_slope == Approx(1.0).epsilon(1e-12));

    // w(0) = gamma theta(0) - theta'(0) with theta(x, 0) = I_0(2 e^{-x/2}) for V = e^{-x}
    const auto r1 = jost_w_zero(make_exponential(1, 1), 1.0);
    const double ref = std::cyl_bessel_i(0.0, 2.0) + std::cyl_bessel_i(1.0, 2.0);
    CHECK(std::abs(r1.w_at_zero - ref) <= r1.est_error + 1e-13);
    CHECK(std::abs(r1.w_at_zero - r1.w_at_zero_rep) < 1e-10);
    CHECK_FALSE(r1.is_resonant);
  }

  TEST_CASE("tuned zero-energy resonance") {
    const double t = oracle::resonance_t();
    const double c = -t * t / 4;
    const auto v = make_exponential(c, 1);
    const auto r = jost_w_zero(v, 1.0);
    CHECK(std::abs(r.w_at_zero) < 1e-8);
    CHECK(r.is_resonant);
    REQUIRE(r.w0_slope.has_value());
    // w(k) ~ -i w0 k near k = 0
    const double k = 1e-6;
    const cplx slope = I * oracle::exp_jost_w(c, 1, 1.0, k) / k;
    CHECK(std::abs(*r.w0_slope) > 1e-3);
    CHECK(*r.w0_slope == Approx(slope.real()).epsilon(1e-4));
  }

  TEST_CASE("phase table: free case, series and symmetry") {
    const std::vector<double> ks = {0.01, 0.1, 1.0, 10.0, 50.0};
    const auto t0 = phase_table(Potential{}, 1.0, ks);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      CHECK(t0.a_vals[i] == 1.0);
      CHECK(t0.eta_vals[i] == 0.0);
    }
    const auto v = make_exponential(1, 1);
    const auto t = phase_table(v, 1.0, ks);
    const double l1 = -1.0, l3 = 5.5;
    CHECK(std::abs(t.eta_vals[4] + l1 / 100.0) <= 2 * std::abs(l3) / std::pow(100.0, 3));
    for (double k : {0.3, 2.0, 20.0}) {
      const auto p = W(v, 1.0, k), m = W(v, 1.0, -k);
      CHECK(std::abs(p.w - std::conj(m.w)) <= p.est_error + m.est_error);
      const double eta_p = std::arg(p.D), eta_m = std::arg(m.D);
      CHECK(std::abs(eta_p + eta_m) < 1e-12);
    }
  }

  TEST_CASE("Jost function does not vanish on the real axis") {
    for (const char* spec : {"exp:1,1", "exp:-3,2", "gauss:-2,1", "bump:-4,2"})
      for (double g : {-1.0, 0.0, 1.0}) {
        const auto v = parse_potential(spec);
        const auto ell = ell_closed_forms(v, g);
        const auto t = adaptive_phase_table(v, g, ell);
        for (std::size_t i = 0; i < t.ks.size(); ++i) CHECK(t.a_vals[i] > 0.0);
        CHECK(t.audit.violated == 0);
      }
  }

  TEST_CASE("determinant decay along rays") {
    for (const char* spec : {"exp:1,1", "gauss:-2,1"})
      for (double angle : {0.0, 0.4, 1.2, 1.5707963267948966}) {
        const auto v = parse_potential(spec);
        const double c1 = ray_constant(v, 0.5, angle, 12);
        const double c2 = ray_constant(v, 0.5, angle, 23);
        CHECK(c1 < 10.0);
        CHECK(c2 == Approx(c1).epsilon(0.2));
      }
  }

  TEST_CASE("conjugation symmetry of w") {
    const auto v = make_gaussian(-2, 1);
    for (cplx z : {cplx(0.7, 0.2), cplx(3, 1), cplx(0.1, 2), cplx(0, 1.1), cplx(5)}) {
      const auto a = W(v, 0.3, z), b = W(v, 0.3, -std::conj(z));
      CHECK(std::abs(a.w - std::conj(b.w)) <= a.est_error + b.est_error);
    }
  }

  TEST_CASE("regular solution from Jost solutions") {
    for (const char* spec : {"exp:-3,2", "bump:-4,2"}) {
      const auto v = parse_potential(spec);
      const double g = -0.5;
      for (double k : {0.6, 1.5, 4.0}) {
        const std::vector<double> xs = {0.0, 0.5, 1.5, 3.0};
        const auto phi = regular_volterra(v, g, SpectralPoint::from_zeta(k), xs);
        const auto tp = jost_b_iteration(v, SpectralPoint::from_zeta(k), xs);
        const auto tm = jost_backward(v, SpectralPoint::from_zeta(-k), xs);
        const auto wp = W(v, g, k), wm = W(v, g, -k);
        for (std::size_t i = 0; i < xs.size(); ++i) {
          const cplx rec = (tp.samples[i].value * wm.w - tm.samples[i].value * wp.w) / (2.0 * I * k);
          const double err = (tp.samples[i].est_error * std::abs(wm.w) + tm.samples[i].est_error * std::abs(wp.w) +
                              (wp.est_error + wm.est_error) * std::abs(tp.samples[i].value)) / (2 * k);
          CHECK(std::abs(rec - phi.samples[i].value) <= 10 * (err + phi.samples[i].est_error) + 1e-12);
        }
      }
    }
  }

  TEST_CASE("resolvent trace difference") {
    CHECK(std::abs(trace_difference(Potential{}, 0.7, -2.0)) < 1e-15);
    CHECK(std::abs(resolvent_trace_numeric(Potential{}, 0.7, -2.0, 20.0)) < 1e-15);

    const auto e = make_exponential(1, 1);
    const cplx td = trace_difference(e, 1.0, -4.0);
    cplx prev;
    double prev_gap = 1e300;
    for (double X : {10.0, 20.0, 40.0}) {
      const cplx num = resolvent_trace_numeric(e, 1.0, -4.0, X);
      const double gap = std::abs(num - td);
      CHECK(gap <= prev_gap);
      prev_gap = gap;
      prev = num;
    }
    CHECK(std::abs(prev - td) < 1e-6);

    const cplx re = trace_difference(make_exponential(-3, 2), 0.0, -1.0);
    CHECK(std::abs(re.imag()) < 1e-8);

    const auto b = make_compact_bump(-4, 2);
    const cplx b1 = resolvent_trace_numeric(b, 0.0, -1.0, 6.0), b2 = resolvent_trace_numeric(b, 0.0, -1.0, 12.0);
    CHECK(std::abs(b1 - b2) < 1e-4);
    CHECK(std::abs(b2 - trace_difference(b, 0.0, -1.0)) < 1e-6);

    CHECK_THROWS_AS(trace_difference(Potential{}, -2.0, -4.0), SolverError);
  }

  TEST_CASE("invalid arguments") {
    CHECK_THROWS_AS(W(Potential{}, 1.0, 0.0), SolverError);
    CHECK_THROWS_AS(jost_w_zero(make_exponential(1, 1).with_decay_class(DecayClass::Integrable), 1.0), SolverError);
    const std::vector<double> bad = {1.0, 0.5};
    CHECK_THROWS_AS(phase_table(make_exponential(1, 1), 1.0, bad), SolverError);
  }
}
