#include "halfline/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "halfline/asymptotics.hpp"
#include "halfline/errors.hpp"

namespace halfline {

namespace {

const cplx I{0.0, 1.0};

struct WImag {
  double value = 0.0;  // Re w(i kappa)
  double err = 0.0;
};

WImag w_imag(const Potential& v, double gamma, double kappa, double tol, BoundAudit& audit) {
  JostOptions o;
  o.solve.tolerance = tol;
  o.derivative = false;
  o.cross_check = false;
  const auto e = jost_w(v, gamma, SpectralPoint::from_zeta({0.0, kappa}), o);
  audit.merge(e.audit);
  if (std::abs(e.w.imag()) > 1e-8 * std::abs(e.w) + 10.0 * e.est_error)
    fail(ErrorCode::RealityViolation, "w(i kappa) is not real at kappa = " + std::to_string(kappa));
  return {e.w.real(), e.est_error};
}

struct Root {
  double kappa, residual, slope, err;
};

Root polish(const Potential& v, double gamma, double a, double b, double fa, double tol, BoundAudit& audit) {
  // bisection to a modest width, then Newton with the analytic derivative
  for (int it = 0; it < 200 && (b - a) > 1e-6 * b; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = w_imag(v, gamma, m, tol, audit).value;
    if (fm == 0.0) {
      a = b = m;
      break;
    }
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  double kappa = 0.5 * (a + b);
  JostOptions o;
  o.solve.tolerance = tol;
  o.cross_check = false;
  o.derivative = true;
  JostEvaluation e;
  for (int it = 0; it < 60; ++it) {
    e = jost_w(v, gamma, SpectralPoint::from_zeta({0.0, kappa}), o);
    audit.merge(e.audit);
    // d/dkappa w(i kappa) = i w'(zeta)
    const double fp = (I * e.w_dot).real();
    if (fp == 0.0) break;
    double step = e.w.real() / fp;
    double next = kappa - step;
    if (!(next > a && next < b) && a < b) next = 0.5 * (a + b), step = kappa - next;
    const bool done = std::abs(e.w) <= 1e-10 * (1.0 + kappa) && std::abs(step) <= 1e-14 * (1.0 + kappa);
    if ((e.w.real() < 0.0) == (fa < 0.0)) a = std::max(a, std::min(kappa, b));
    else b = std::min(b, std::max(kappa, a));
    if (done) break;
    kappa = next;
  }
  const double slope = std::abs(e.w_dot);
  return {kappa, std::abs(e.w), slope, slope > 0.0 ? e.est_error / slope : 0.0};
}

}  // namespace

double default_kappa_max(const Potential& v, double gamma) {
  return std::sqrt(v.sup_negative_part()) + std::abs(gamma) + 1.0;
}

EigenvalueSet find_eigenvalues(const Potential& v, double gamma, const EigenOptions& opt) {
  if (!std::isfinite(gamma)) fail(ErrorCode::InvalidArgument, "gamma must be finite");
  if (v.decay_class() < DecayClass::FirstMoment)
    fail(ErrorCode::DecayTooWeak, "eigenvalue search needs a finite first moment of |V|");
  EigenvalueSet out;
  out.kappa_min = opt.kappa_min;
  out.kappa_max = opt.kappa_max.value_or(default_kappa_max(v, gamma));
  if (!(out.kappa_min > 0.0) || !(out.kappa_max > out.kappa_min))
    fail(ErrorCode::InvalidArgument, "need 0 < kappa_min < kappa_max");
  if (gamma < 0.0) out.h0_eigenvalue = -gamma * gamma;

  std::optional<int> expected = opt.expected_count;
  if (!expected && opt.check_levinson) expected = levinson_count(v, gamma).count;

  const double decades = std::log10(out.kappa_max / out.kappa_min);
  for (int r = 0;; ++r) {
    const int n = std::max(2, static_cast<int>(std::ceil(decades * opt.points_per_decade * (1 << r)))) + 1;
    std::vector<double> ks(n), fs(n);
    for (int i = 0; i < n; ++i) {
      ks[i] = out.kappa_min * std::pow(out.kappa_max / out.kappa_min, static_cast<double>(i) / (n - 1));
      fs[i] = w_imag(v, gamma, ks[i], opt.tolerance, out.audit).value;
    }
    std::vector<Root> roots;
    for (int i = 0; i + 1 < n; ++i) {
      if (fs[i] == 0.0) {
        roots.push_back(polish(v, gamma, ks[i], ks[i], fs[i], opt.tolerance, out.audit));
        continue;
      }
      if ((fs[i] < 0.0) != (fs[i + 1] < 0.0) && fs[i + 1] != 0.0)
        roots.push_back(polish(v, gamma, ks[i], ks[i + 1], fs[i], opt.tolerance, out.audit));
    }
    if (fs[n - 1] == 0.0) roots.push_back(polish(v, gamma, ks[n - 1], ks[n - 1], 0.0, opt.tolerance, out.audit));
    out.scan_points = n;
    out.refinements = r;
    const bool match = !expected || static_cast<int>(roots.size()) == *expected;
    if (match || r >= opt.max_refinements) {
      if (!match)
        fail(ErrorCode::CountMismatch, "found " + std::to_string(roots.size()) + " eigenvalues, Levinson predicts " +
                                           std::to_string(*expected));
      std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.kappa > b.kappa; });
      for (const auto& rt : roots) {
        if (!(rt.slope > 1e-8)) fail(ErrorCode::Inconsistent, "eigenvalue zero of w is not simple");
        out.kappas.push_back(rt.kappa);
        out.lambdas.push_back(-rt.kappa * rt.kappa);
        out.residuals.push_back(rt.residual);
        out.slopes.push_back(rt.slope);
        out.errors.push_back(rt.err);
        if (rt.kappa > 0.95 * out.kappa_max) out.near_kappa_max = true;
      }
      out.count = static_cast<int>(roots.size());
      return out;
    }
  }
}

std::vector<double> fd_negative_eigenvalues(const Potential& v, double gamma, double L, int n) {
  if (!(L > 0.0) || n < 2) fail(ErrorCode::InvalidArgument, "fd oracle needs L > 0 and n >= 2");
  const double h = L / n;
  const double h2 = 1.0 / (h * h);
  std::vector<double> d(n), e(n > 1 ? n - 1 : 0);
  for (int i = 0; i < n; ++i) d[i] = 2.0 * h2 + v(i * h);
  d[0] += 2.0 * gamma * h * h2;
  for (int i = 0; i + 1 < n; ++i) e[i] = -h2;
  e[0] = -std::sqrt(2.0) * h2;  // symmetrized ghost-point row

  // number of eigenvalues below x
  auto sturm = [&](double x) {
    int count = 0;
    double q = d[0] - x;
    if (q < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
      if (q == 0.0) q = 1e-300;
      q = d[i] - x - e[i - 1] * e[i - 1] / q;
      if (q < 0.0) ++count;
    }
    return count;
  };
  const int neg = sturm(0.0);
  double lo = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < n ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - r);
  }
  std::vector<double> out;
  for (int j = 0; j < neg; ++j) {
    double a = lo, b = 0.0;
    for (int it = 0; it < 200 && b - a > 4e-16 * std::max(std::abs(a), std::abs(b)); ++it) {
      const double m = 0.5 * (a + b);
      if (sturm(m) > j) b = m;
      else a = m;
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

FdResult fd_oracle(const Potential& v, double gamma, double L, int n) {
  if (n < 2000) fail(ErrorCode::InvalidArgument, "fd oracle needs n >= 2000");
  FdResult r;
  r.coarse = fd_negative_eigenvalues(v, gamma, L, n);
  r.fine = fd_negative_eigenvalues(v, gamma, L, 2 * n);
  const std::size_t m = std::min(r.coarse.size(), r.fine.size());
  // an eigenvalue just below 0 may exist on one grid only; pair from the bottom
  for (std::size_t i = 0; i < m; ++i) {
    r.eigenvalues.push_back((4.0 * r.fine[i] - r.coarse[i]) / 3.0);
    r.errors.push_back(std::abs(r.fine[i] - r.coarse[i]) / 3.0);
  }
  return r;
}

double levinson_offset(double gamma, bool resonant) {
  if (!resonant) return gamma > 0.0 ? 0.0 : (gamma == 0.0 ? -0.5 : -1.0);
  return gamma > 0.0 ? 0.5 : (gamma == 0.0 ? 0.0 : -0.5);
}

LevinsonReport levinson_from(double eta_zero, double gamma, const ResonanceReport& res, double tolerance) {
  if (res.ambiguous)
    fail(ErrorCode::CaseUndetermined, "|w(0)| = " + std::to_string(std::abs(res.w_at_zero)) +
                                          " is within a factor 2 of the resonance threshold");
  LevinsonReport out;
  out.eta_zero = eta_zero;
  out.shift = -eta_zero;  // eta(inf) = 0 by the branch convention
  out.resonant = res.is_resonant;
  out.w_at_zero = res.w_at_zero;
  out.offset = levinson_offset(gamma, res.is_resonant);
  const double n = out.shift / std::numbers::pi - out.offset;
  const double nr = std::round(n);
  out.distance = std::abs(n - nr);
  if (out.distance > tolerance || nr < 0.0)
    fail(ErrorCode::NotNearInteger, "phase shift / pi = " + std::to_string(out.shift / std::numbers::pi) +
                                        " is not an admissible case value");
  out.count = static_cast<int>(nr);
  const char* g = gamma > 0.0 ? "gamma>0" : (gamma == 0.0 ? "gamma=0" : "gamma<0");
  const double c = out.offset;
  const char* form = c == 0.0 ? "pi N" : (c == 0.5 ? "pi (N + 1/2)" : (c == -0.5 ? "pi (N - 1/2)" : "pi (N - 1)"));
  out.case_label = std::string(res.is_resonant ? "w(0)=0" : "w(0)!=0") + ", " + g + ": " + form;
  return out;
}

LevinsonReport levinson_count(const Potential& v, double gamma, const AdaptivePhaseOptions& opt) {
  if (v.decay_class() < DecayClass::FirstMoment)
    fail(ErrorCode::DecayTooWeak, "Levinson count needs a finite first moment of |V|");
  const auto res = jost_w_zero(v, gamma);
  const auto ell = ell_closed_forms(v, gamma);
  const auto table = adaptive_phase_table(v, gamma, ell, opt);
  return levinson_from(table.eta_zero, gamma, res);
}

}  // namespace halfline
