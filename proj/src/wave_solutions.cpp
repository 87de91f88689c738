#include "halfline/wave_solutions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "halfline/errors.hpp"
#include "panel_solvers.hpp"

namespace halfline {

namespace {

const cplx I{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_grid(std::span<const double> xs) {
  if (xs.empty()) fail(ErrorCode::InvalidArgument, "empty x grid");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] >= 0.0) || !std::isfinite(xs[i])) fail(ErrorCode::InvalidArgument, "x must be finite and >= 0");
    if (i > 0 && xs[i] < xs[i - 1]) fail(ErrorCode::InvalidArgument, "x grid must be sorted");
  }
}

using Evaluator = std::function<std::pair<cplx, cplx>(double)>;

// Residual of -u'' + (V - zeta^2) u = 0 from a Richardson-extrapolated central
// difference of u' around each probe point.
std::vector<ProbeResidual> probe(const Potential& v, cplx zeta, double x_end, const Evaluator& eval) {
  std::vector<ProbeResidual> out;
  if (!(x_end > 0.0)) return out;
  for (double frac : {0.25, 0.5, 0.75}) {
    const double x = frac * x_end;
    const double h = 1e-3 * std::min(x, 1.0);
    auto d = [&](double s) { return (eval(x + s).second - eval(x - s).second) / (2.0 * s); };
    const cplx upp = (4.0 * d(0.5 * h) - d(h)) / 3.0;
    const cplx u = eval(x).first;
    const double Vx = v(x);
    const double scale = (1.0 + std::abs(Vx) + std::norm(zeta)) * std::max(std::abs(u), 1e-300);
    out.push_back({x, std::abs(upp - (Vx - zeta * zeta) * u) / scale});
  }
  return out;
}

// Stencil points the ODE solvers must visit for probing.
std::vector<double> probe_stencil(double x_end) {
  std::vector<double> pts;
  if (!(x_end > 0.0)) return pts;
  for (double frac : {0.25, 0.5, 0.75}) {
    const double x = frac * x_end;
    const double h = 1e-3 * std::min(x, 1.0);
    for (double s : {-h, -0.5 * h, 0.0, 0.5 * h, h}) pts.push_back(x + s);
  }
  return pts;
}

std::vector<double> merged(std::span<const double> xs, const std::vector<double>& extra) {
  std::vector<double> all(xs.begin(), xs.end());
  all.insert(all.end(), extra.begin(), extra.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

std::size_t position(const std::vector<double>& all, double x) {
  return static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), x) - all.begin());
}

}  // namespace

std::string_view to_string(WaveKind k) { return k == WaveKind::Regular ? "REGULAR" : "JOST"; }

std::string_view to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::VolterraSeries: return "VOLTERRA_SERIES";
    case SolveMethod::DirectIntegration: return "DIRECT_INTEGRATION";
    case SolveMethod::BIteration: return "B_ITERATION";
    case SolveMethod::BackwardIntegration: return "BACKWARD_INTEGRATION";
  }
  return "?";
}

SpectralPoint SpectralPoint::from_zeta(cplx zeta) {
  if (!(zeta.imag() >= 0.0) || !std::isfinite(zeta.real()) || !std::isfinite(zeta.imag()))
    fail(ErrorCode::InvalidArgument, "spectral parameter needs finite zeta with Im zeta >= 0");
  return {zeta, zeta.imag() == 0.0, zeta.real() == 0.0};
}

SpectralPoint SpectralPoint::from_energy(cplx z) {
  cplx zeta = std::sqrt(z);
  if (zeta.imag() < 0.0) zeta = -zeta;
  if (zeta.imag() == 0.0) zeta.imag(0.0);
  if (zeta.real() == 0.0) zeta.real(0.0);
  return from_zeta(zeta);
}

void BoundAudit::record(double deviation, double bound, double slack) {
  ++checked;
  if (!(deviation <= bound + slack)) ++violated;
  const double allowed = bound + slack;
  if (allowed > 0.0 && std::isfinite(allowed)) worst_ratio = std::max(worst_ratio, deviation / allowed);
}

void BoundAudit::merge(const BoundAudit& o) {
  checked += o.checked;
  violated += o.violated;
  worst_ratio = std::max(worst_ratio, o.worst_ratio);
}

cplx expm1_over(cplx z) {
  if (std::abs(z) < 1e-3) {
    // Taylor series to z^5 is exact to rounding here
    return 1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0 * (1.0 + z / 5.0 * (1.0 + z / 6.0))));
  }
  const double x = z.real(), y = z.imag();
  const double s = std::sin(0.5 * y);
  const cplx em1{std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
  return em1 / z;
}

cplx free_regular(double gamma, cplx zeta, double x) {
  if (zeta == 0.0) return 1.0 + gamma * x;
  return std::exp(-I * zeta * x) * detail::free_p(gamma, zeta, x);
}

cplx free_regular_derivative(double gamma, cplx zeta, double x) {
  if (zeta == 0.0) return gamma;
  const cplx e = std::exp(-I * zeta * x);
  return e * (detail::free_dp(gamma, zeta, x) - I * zeta * detail::free_p(gamma, zeta, x));
}

double regular_bound(const Potential& v, double gamma, cplx zeta, double x) {
  const double ag = std::abs(gamma);
  if (ag == 0.0) return kInf;
  const double A = v.tail_abs(0.0) + ag * v.tail_abs_moment(0.0);
  const double e = std::abs(zeta.imag()) * x + std::log(std::max(ag * x, 1e-300)) +
                   std::log(std::max(std::expm1(std::min(A / ag, 700.0)), 1e-300));
  if (x == 0.0 || A == 0.0) return 0.0;
  return e > 700.0 ? kInf : std::exp(e);
}

double regular_bound_neumann(const Potential& v, cplx zeta, double x) {
  const double A = x * v.tail_abs(0.0);
  if (A == 0.0) return 0.0;
  const double e = std::abs(zeta.imag()) * x + std::log(std::expm1(std::min(A, 700.0)));
  return e > 700.0 ? kInf : std::exp(e);
}

double jost_bound(const Potential& v, cplx zeta, double x) {
  const double az = std::abs(zeta);
  const double t = v.tail_abs(x);
  if (t == 0.0) return 0.0;
  if (az == 0.0 || t / az > 700.0) return kInf;
  return std::exp(-zeta.imag() * x) * std::expm1(t / az);
}

double jost_derivative_bound(const Potential& v, cplx zeta, double x) {
  const double b = jost_bound(v, zeta, x);
  return std::isfinite(b) ? std::abs(zeta) * b : kInf;
}

WaveSolution regular_volterra(const Potential& v, double gamma, const SpectralPoint& sp,
                              std::span<const double> xs, const SolveOptions& opt) {
  check_grid(xs);
  const cplx zeta = sp.zeta;
  if (zeta == 0.0) fail(ErrorCode::SmallZeta, "Volterra series needs zeta != 0");
  double x_end = xs.back();
  if (!(x_end > 0.0)) x_end = 1.0;
  const auto s = detail::solve_p_series(v, gamma, zeta, x_end, opt.tolerance, opt.max_iterations);
  const auto& g = s.pg.grid;

  WaveSolution out;
  out.report.method = SolveMethod::VolterraSeries;
  out.report.iterations = s.iterations;
  out.report.x_max = x_end;
  const double az = std::abs(zeta);
  auto eval = [&](double x) {
    const cplx d = g.interpolate(s.delta, x), dd = g.interpolate(s.ddelta, x);
    const cplx p = detail::free_p(gamma, zeta, x) + d;
    const cplx dp = detail::free_dp(gamma, zeta, x) + dd;
    const cplx e = std::exp(-I * zeta * x);
    return std::pair<cplx, cplx>{e * p, e * (dp - I * zeta * p)};
  };
  for (double x : xs) {
    WaveSample w;
    w.x = x;
    w.kind = WaveKind::Regular;
    const double grow = std::exp(std::min(zeta.imag() * x, 700.0));
    if (x == 0.0) {
      w.value = 1.0;
      w.derivative = gamma;
    } else {
      std::tie(w.value, w.derivative) = eval(x);
      w.free_deviation = std::exp(-I * zeta * x) * g.interpolate(s.delta, x);
    }
    w.est_error = grow * s.error * (1.0 + az);
    out.samples.push_back(w);
  }
  const auto nodes = g.all_nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double x = nodes[i];
    const double grow = std::exp(std::min(zeta.imag() * x, 700.0));
    const double bound = gamma != 0.0 ? regular_bound(v, gamma, zeta, x) : regular_bound_neumann(v, zeta, x);
    out.report.audit.record(grow * std::abs(s.delta[i]), bound, grow * (s.error + 1e-14));
  }
  if (opt.probe_residuals) out.report.residuals = probe(v, zeta, x_end, eval);
  return out;
}

WaveSolution regular_direct(const Potential& v, double gamma, const SpectralPoint& sp,
                            std::span<const double> xs, const SolveOptions& opt) {
  check_grid(xs);
  const cplx zeta = sp.zeta;
  const double x_end = xs.back();
  const auto all = merged(xs, opt.probe_residuals ? probe_stencil(x_end) : std::vector<double>{});
  const auto s = detail::solve_p_ode(v, gamma, zeta, all, opt.tolerance);

  auto at = [&](std::size_t i, double x) {
    const cplx p = detail::free_p(gamma, zeta, x) + s.delta[i];
    const cplx dp = detail::free_dp(gamma, zeta, x) + s.ddelta[i];
    const cplx e = std::exp(-I * zeta * x);
    return std::pair<cplx, cplx>{e * p, e * (dp - I * zeta * p)};
  };
  WaveSolution out;
  out.report.method = SolveMethod::DirectIntegration;
  out.report.iterations = s.steps;
  out.report.x_max = x_end;
  out.report.audit = s.audit;
  const double az = std::abs(zeta);
  for (double x : xs) {
    const std::size_t i = position(all, x);
    WaveSample w;
    w.x = x;
    w.kind = WaveKind::Regular;
    if (x == 0.0) {
      w.value = 1.0;
      w.derivative = gamma;
    } else {
      std::tie(w.value, w.derivative) = at(i, x);
      w.free_deviation = std::exp(-I * zeta * x) * s.delta[i];
    }
    w.est_error = std::exp(std::min(zeta.imag() * x, 700.0)) * s.error * (1.0 + az);
    out.samples.push_back(w);
  }
  if (opt.probe_residuals)
    out.report.residuals = probe(v, zeta, x_end, [&](double x) { return at(position(all, x), x); });
  return out;
}

WaveSolution jost_b_iteration(const Potential& v, const SpectralPoint& sp, std::span<const double> xs,
                              const SolveOptions& opt) {
  check_grid(xs);
  const cplx zeta = sp.zeta;
  const double az = std::abs(zeta);
  if (az < opt.small_zeta_cutoff)
    fail(ErrorCode::SmallZeta, "|zeta| below the b-iteration cutoff; use backward integration");
  double x_end = std::max(xs.back(), v.truncation_point(0.1 * opt.tolerance * std::max(az, 1.0)));
  if (!(x_end > 0.0)) x_end = 1.0;
  const auto s = detail::solve_b_series(v, zeta, x_end, opt.tolerance, opt.max_iterations);
  const auto& g = s.pg.grid;

  WaveSolution out;
  out.report.method = SolveMethod::BIteration;
  out.report.iterations = s.iterations;
  out.report.x_max = x_end;
  auto eval = [&](double x) {
    const cplx beta = g.interpolate(s.beta, x), dbeta = g.interpolate(s.dbeta, x);
    const cplx e = std::exp(I * zeta * x);
    return std::pair<cplx, cplx>{e * (1.0 + beta), e * (I * zeta * (1.0 + beta) + dbeta)};
  };
  for (double x : xs) {
    WaveSample w;
    w.x = x;
    w.kind = WaveKind::Jost;
    std::tie(w.value, w.derivative) = eval(x);
    w.free_deviation = std::exp(I * zeta * x) * g.interpolate(s.beta, x);
    w.est_error = std::exp(-zeta.imag() * x) * s.error * (1.0 + az);
    out.samples.push_back(w);
  }
  const auto nodes = g.all_nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double x = nodes[i];
    const double damp = std::exp(-zeta.imag() * x);
    const double slack = damp * (s.error + 1e-15);
    out.report.audit.record(damp * std::abs(s.beta[i]), jost_bound(v, zeta, x), slack);
    out.report.audit.record(damp * std::abs(I * zeta * s.beta[i] + s.dbeta[i]),
                            jost_derivative_bound(v, zeta, x), slack * (1.0 + az));
  }
  if (opt.probe_residuals) out.report.residuals = probe(v, zeta, x_end, eval);
  return out;
}

WaveSolution jost_backward(const Potential& v, const SpectralPoint& sp, std::span<const double> xs,
                           const SolveOptions& opt) {
  check_grid(xs);
  const cplx zeta = sp.zeta;
  const double az = std::abs(zeta);
  double x_max;
  if (opt.x_max) {
    x_max = *opt.x_max;
    if (!(v.tail_abs(x_max) <= opt.tolerance * std::max(az, 1.0)))
      fail(ErrorCode::XMaxTooSmall, "tail of |V| beyond x_max exceeds the tolerance");
    if (x_max < xs.back()) fail(ErrorCode::InvalidArgument, "x_max must cover the output grid");
  } else {
    x_max = std::max(detail::jost_x_max(v, zeta, opt.tolerance), xs.back());
  }
  if (!(x_max > 0.0)) x_max = 1.0;
  auto all = merged(xs, opt.probe_residuals ? probe_stencil(x_max) : std::vector<double>{});
  std::vector<double> desc(all.rbegin(), all.rend());
  const auto s = detail::solve_b_ode(v, zeta, desc, x_max, opt.tolerance, false);
  auto at = [&](double x) {
    const std::size_t i = all.size() - 1 - position(all, x);
    const cplx e = std::exp(I * zeta * x);
    return std::pair<cplx, cplx>{e * (1.0 + s.beta[i]), e * (I * zeta * (1.0 + s.beta[i]) + s.dbeta[i])};
  };

  WaveSolution out;
  out.report.method = SolveMethod::BackwardIntegration;
  out.report.iterations = s.steps;
  out.report.x_max = x_max;
  out.report.audit = s.audit;
  for (double x : xs) {
    WaveSample w;
    w.x = x;
    w.kind = WaveKind::Jost;
    std::tie(w.value, w.derivative) = at(x);
    w.free_deviation = std::exp(I * zeta * x) * s.beta[all.size() - 1 - position(all, x)];
    w.est_error = std::exp(-zeta.imag() * x) * s.error * (1.0 + az);
    out.samples.push_back(w);
  }
  if (opt.probe_residuals) out.report.residuals = probe(v, zeta, x_max, at);
  return out;
}

}  // namespace halfline
