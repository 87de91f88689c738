#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "halfline/errors.hpp"
#include "halfline/trace_identities.hpp"
#include "oracles.hpp"

using namespace halfline;
using doctest::Approx;

namespace {

bool throws_code(ErrorCode code, auto&& fn) {
  try {
    fn();
  } catch (const SolverError& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_SUITE("trace_identities") {
  TEST_CASE("M_s") {
    CHECK(m_s(-2.0, 1.0) == Approx(4.0));
    CHECK(m_s(-2.0, 0.5) == Approx(2.0));
    CHECK(m_s(-2.0, 1.5) == Approx(8.0));
    CHECK(m_s(3.0, 1.0) == 0.0);
    CHECK(m_s(0.0, 2.0) == 0.0);
    const auto z = m_s(-2.0, std::complex<double>(1.0, 0.0));
    CHECK(z.real() == Approx(4.0));
    CHECK(std::abs(z.imag()) < 1e-14);
  }

  TEST_CASE("free operator: every identity holds exactly") {
    for (double g : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      TraceContext ctx(Potential{}, g);
      for (double s : {0.5, 1.0, 1.5, 2.0}) {
        const auto r = ctx.verify(s);
        CAPTURE(g);
        CAPTURE(s);
        CHECK(r.pass);
        CHECK(std::abs(r.residual) < 1e-10);
        CHECK(std::abs(r.lhs_continuum) < 1e-10);
        CHECK(std::abs(r.rhs) < 1e-14);
      }
      CHECK(ctx.audit().violated == 0);
    }
  }

  TEST_CASE("e^{-x}, gamma = 1") {
    TraceContext ctx(make_exponential(1, 1), 1.0);
    CHECK(ctx.eigenvalues().count == 0);
    for (double s : {0.5, 1.0, 1.5, 2.0}) {
      const auto r = ctx.verify(s);
      CAPTURE(s);
      CHECK(r.pass);
      CHECK(r.lhs_discrete == 0.0);
      CHECK(std::abs(r.residual) <= 5.0 * r.budget.total());
      CHECK(std::abs(r.residual) < 1e-6);
    }
  }

  TEST_CASE("-3 e^{-2x}, gamma = 0, order 1") {
    // l_2 = V(0) = -3 and rhs = -l_2 / 4
    const auto r = verify_identity(make_exponential(-3, 2), 0.0, 1.0);
    CHECK(r.rhs == Approx(0.75).epsilon(1e-12));
    CHECK(r.pass);
    CHECK(std::abs(r.residual / r.rhs) < 1e-3);
    // one bound state, no M_s at gamma = 0
    const auto e = find_eigenvalues(make_exponential(-3, 2), 0.0);
    REQUIRE(e.count == 1);
    CHECK(r.lhs_discrete == Approx(e.kappas[0] * e.kappas[0]).epsilon(1e-12));
  }

  TEST_CASE("dropping M_1 shifts the order-1 residual by gamma^2") {
    for (double g : {-1.0, -1.5}) {
      TraceOptions with, without;
      without.include_m_s = false;
      const auto v = make_gaussian(-2, 1);
      const auto a = verify_identity(v, g, 1.0, with);
      const auto b = verify_identity(v, g, 1.0, without);
      CAPTURE(g);
      CHECK(a.pass);
      CHECK(!b.pass);
      CHECK(std::abs((b.residual - a.residual) - g * g) <= 5.0 * (a.budget.total() + b.budget.total()));
    }
  }

  TEST_CASE("tightening tolerances does not degrade the designated cell") {
    const auto v = make_exponential(1, 1);
    std::vector<double> prev;
    for (double scale : {1.0, 0.5}) {
      TraceOptions o;
      o.tolerance_scale = scale;
      TraceContext ctx(v, 1.0, o);
      std::vector<double> cur;
      for (double s : {0.5, 1.0, 1.5, 2.0}) cur.push_back(std::abs(ctx.verify(s).residual));
      if (!prev.empty())
        for (std::size_t i = 0; i < cur.size(); ++i) {
          CAPTURE(i);
          CHECK((cur[i] < prev[i] || cur[i] < 1e-9));
        }
      prev = cur;
    }
  }

  TEST_CASE("Levinson through the trace context") {
    {
      TraceContext ctx(Potential{}, 1.0);
      const auto l = ctx.levinson();
      CHECK(l.pass);
      CHECK(l.report.count == 0);
      CHECK(l.eigen_count == 0);
    }
    {
      TraceContext ctx(Potential{}, -1.0);
      const auto l = ctx.levinson();
      CHECK(l.pass);
      CHECK(l.report.count == 1);
      CHECK(l.eigen_count == 1);
    }
    {
      const double t = oracle::resonance_t();
      TraceContext ctx(make_exponential(-t * t / 4, 1), 1.0);
      const auto l = ctx.levinson();
      CHECK(l.pass);
      CHECK(l.report.resonant);
      CHECK(l.report.shift == Approx(std::numbers::pi * (l.eigen_count + 0.5)).epsilon(1e-3));
      CHECK(l.deviation < 1e-3);
    }
  }

  TEST_CASE("order validation") {
    TraceContext ctx(make_exponential(1, 1), 1.0);
    CHECK(throws_code(ErrorCode::OrderTooHigh, [&] { ctx.verify(2.5); }));
    CHECK(throws_code(ErrorCode::InvalidArgument, [&] { ctx.verify(0.75); }));
    CHECK(throws_code(ErrorCode::InvalidArgument, [&] { ctx.verify(0.0); }));
    TraceOptions o;
    o.experimental = true;
    TraceContext ex(make_exponential(1, 1), 1.0, o);
    const auto r = ex.verify(2.5);
    CHECK(r.experimental);
    CHECK(throws_code(ErrorCode::OrderTooHigh, [&] { ex.verify(4.5); }));
  }

  TEST_CASE("tail that cannot be certified") {
    TraceOptions o;
    o.k_top_max = 64.0;
    o.tail_tolerance = 1e-14;
    TraceContext ctx(make_compact_bump(-4, 2), -1.0, o);
    CHECK(throws_code(ErrorCode::TailNotConverged, [&] { ctx.verify(1.0); }));
  }

  TEST_CASE("run_matrix keeps the input order") {
    const std::vector<MatrixCell> cells = {{"exp:1,1", 1.0}, {"exp:-3,2", 0.0}, {"exp:1,1", -1.0}};
    const auto res = run_matrix(cells, {0.5, 1.0});
    REQUIRE(res.size() == cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      CAPTURE(i);
      CHECK(res[i].error.empty());
      CHECK(res[i].cell.potential_spec == cells[i].potential_spec);
      CHECK(res[i].cell.gamma == cells[i].gamma);
      REQUIRE(res[i].reports.size() == 2);
      CHECK(res[i].reports[0].order == 0.5);
      CHECK(res[i].reports[1].order == 1.0);
      for (const auto& r : res[i].reports) CHECK(r.pass);
      REQUIRE(res[i].levinson);
      CHECK(res[i].levinson->pass);
    }
    CHECK(acceptance_matrix().size() == 12);
  }
}
