#include "panel_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "halfline/errors.hpp"
#include "halfline/ode.hpp"

namespace halfline::detail {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const cd I{0.0, 1.0};

double sup_norm(const std::vector<cd>& v) {
  double s = 0.0;
  for (const auto& z : v) s = std::max(s, std::abs(z));
  return s;
}

}  // namespace

PotentialGrid potential_grid(const Potential& v, double x_end, double osc_width) {
  const auto& rule = ChebyshevRule::standard();
  const int m = rule.size();
  const double thresh = 1e-15 * std::max(v.coefficient_scale(), 1e-300);
  std::vector<double> anchors{0.0, x_end};
  for (double b : v.breakpoints())
    if (b > 0.0 && b < x_end) anchors.push_back(b);
  double maxw = v.length_scale();
  if (osc_width > 0.0) maxw = std::min(maxw, osc_width);
  std::vector<double> vals(m);
  auto sample = [&](double l, double r) {
    for (int j = 0; j < m; ++j) vals[j] = v(0.5 * (l + r) + 0.5 * (r - l) * rule.nodes()[j]);
  };
  auto needs_split = [&](double l, double r) {
    if (v.is_zero()) return false;
    sample(l, r);
    return rule.tail_coefficient(vals) > thresh;
  };
  PanelGrid grid = PanelGrid::build(anchors, maxw, needs_split, 1e-7 * std::max(1.0, x_end));
  PotentialGrid pg{grid, std::vector<double>(grid.size()), 0.0};
  for (int p = 0; p < grid.panels(); ++p) {
    for (int j = 0; j < m; ++j) pg.v[grid.index(p, j)] = v(grid.node(p, j));
    if (!v.is_zero())
      pg.resolution_error +=
          grid.width(p) * rule.tail_coefficient(std::span<const double>(pg.v.data() + grid.index(p, 0), m));
  }
  return pg;
}

ExpKernel::ExpKernel(const PanelGrid& g, cd zeta, bool levin) : g_(&g), zeta_(zeta), levin_(levin) {
  const int m = g.m();
  const auto& rule = g.rule();
  right_cum_.resize(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) right_cum_[i * m + j] = rule.weight(j) - rule.cumulative(i, j);
  const std::size_t n = g.size();
  to_right_.resize(n);
  if (!levin_) {
    up_.resize(n);
    down_.resize(n);
    from_left_.resize(n);
  }
  const cd k2 = 2.0 * I * zeta;
  for (int p = 0; p < g.panels(); ++p) {
    const double a = g.left(p), b = g.right(p), c = 0.5 * (a + b);
    for (int j = 0; j < m; ++j) {
      const std::size_t idx = g.index(p, j);
      const double x = g.node(p, j);
      to_right_[idx] = std::exp(k2 * (b - x));
      if (!levin_) {
        up_[idx] = std::exp(k2 * (x - c));
        down_[idx] = std::exp(-k2 * (x - c));
        from_left_[idx] = std::exp(k2 * (x - a));
      }
    }
  }
}

void ExpKernel::backward(const std::vector<cd>& f, std::vector<cd>& E, std::vector<cd>& T) const {
  const PanelGrid& g = *g_;
  const int m = g.m();
  const auto& rule = g.rule();
  E.assign(g.size(), 0.0);
  T.assign(g.size(), 0.0);
  std::vector<cd> u(m), P(m), term(m), next(m);
  cd E_next = 0.0, T_next = 0.0;
  for (int p = g.panels() - 1; p >= 0; --p) {
    const std::size_t base = g.index(p, 0);
    const double half = 0.5 * g.width(p);
    for (int i = 0; i < m; ++i) {
      cd t{};
      for (int j = 0; j < m; ++j) t += right_cum_[i * m + j] * f[base + j];
      T[base + i] = half * t + T_next;
    }
    if (!levin_) {
      for (int j = 0; j < m; ++j) u[j] = up_[base + j] * f[base + j];
      for (int i = 0; i < m; ++i) {
        cd s{};
        for (int j = 0; j < m; ++j) s += right_cum_[i * m + j] * u[j];
        E[base + i] = half * down_[base + i] * s + to_right_[base + i] * E_next;
      }
    } else {
      // P' + i w P = (h/2) f in the local variable, w = zeta h; the Neumann
      // series in d/dt terminates once the terms stop shrinking.
      const cd iw = I * zeta_ * g.width(p);
      double pnorm = 0.0, last = std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        term[j] = half * f[base + j] / iw;
        P[j] = term[j];
        pnorm = std::max(pnorm, std::abs(P[j]));
      }
      for (int k = 1; k < m; ++k) {
        double tn = 0.0;
        for (int i = 0; i < m; ++i) {
          cd s{};
          for (int j = 0; j < m; ++j) s += rule.diff(i, j) * term[j];
          next[i] = -s / iw;
          tn = std::max(tn, std::abs(next[i]));
        }
        if (tn >= last || tn <= 1e-18 * pnorm) break;
        last = tn;
        for (int j = 0; j < m; ++j) P[j] += next[j];
        term.swap(next);
      }
      for (int i = 0; i < m; ++i) E[base + i] = to_right_[base + i] * (P[m - 1] + E_next) - P[i];
    }
    E_next = E[base];
    T_next = T[base];
  }
}

void ExpKernel::forward(const std::vector<cd>& f, std::vector<cd>& F, std::vector<cd>& G) const {
  if (levin_) fail(ErrorCode::InvalidArgument, "forward kernel has no Levin mode");
  const PanelGrid& g = *g_;
  const int m = g.m();
  const auto& rule = g.rule();
  F.assign(g.size(), 0.0);
  G.assign(g.size(), 0.0);
  std::vector<cd> u(m);
  cd F_prev = 0.0, G_prev = 0.0;
  for (int p = 0; p < g.panels(); ++p) {
    const std::size_t base = g.index(p, 0);
    const double half = 0.5 * g.width(p);
    for (int j = 0; j < m; ++j) u[j] = down_[base + j] * f[base + j];
    for (int i = 0; i < m; ++i) {
      cd s{}, t{};
      for (int j = 0; j < m; ++j) {
        const double L = rule.cumulative(i, j);
        s += L * u[j];
        t += L * f[base + j];
      }
      F[base + i] = half * up_[base + i] * s + from_left_[base + i] * F_prev;
      G[base + i] = half * t + G_prev;
    }
    F_prev = F[base + m - 1];
    G_prev = G[base + m - 1];
  }
}

double exp_series_remainder(double q, int n) {
  if (q <= 0.0) return 0.0;
  // first omitted term in log form to avoid overflow
  double log_term = (n + 1) * std::log(q) - std::lgamma(n + 2.0);
  if (log_term < -745.0 && q < n + 2) return 0.0;
  double term = std::exp(log_term), sum = 0.0;
  for (int j = n + 1; j < n + 100000; ++j) {
    sum += term;
    if (j > q && term <= 1e-17 * sum) break;
    term *= q / (j + 1);
  }
  return sum;
}

JostSeries solve_b_series(const Potential& v, cd zeta, double x_end, double tol, int max_iter) {
  const double az = std::abs(zeta);
  if (az == 0.0) fail(ErrorCode::SmallZeta, "b-iteration needs zeta != 0");
  JostSeries out{potential_grid(v, x_end, 0.0), {}, {}, 0, 0.0, false};
  double hmin = std::numeric_limits<double>::infinity();
  for (int p = 0; p < out.pg.grid.panels(); ++p) hmin = std::min(hmin, out.pg.grid.width(p));
  if (az * hmin >= 100.0) {
    out.levin = true;
  } else {
    out.pg = potential_grid(v, x_end, 2.0 / az);
  }
  const auto& g = out.pg.grid;
  const std::size_t n = g.size();
  ExpKernel kernel(g, zeta, out.levin);
  const double q = v.tail_abs(0.0) / az;
  const cd inv2iz = 1.0 / (2.0 * I * zeta);

  out.beta.assign(n, 0.0);
  out.dbeta.assign(n, 0.0);
  std::vector<cd> b(n, 1.0), f(n), E, T;
  double supsum = 1.0, remaining = exp_series_remainder(q, 0);
  bool converged = remaining < 0.1 * tol;
  for (int it = 1; it <= max_iter && !converged; ++it) {
    for (std::size_t i = 0; i < n; ++i) f[i] = out.pg.v[i] * b[i];
    kernel.backward(f, E, T);
    for (std::size_t i = 0; i < n; ++i) {
      b[i] = (E[i] - T[i]) * inv2iz;
      out.beta[i] += b[i];
      out.dbeta[i] -= E[i];
    }
    supsum += sup_norm(b);
    out.iterations = it;
    remaining = exp_series_remainder(q, it);
    if (remaining < 0.1 * tol) converged = true;
  }
  if (!converged)
    fail(ErrorCode::NonConverged, "b-iteration did not meet its majorant within the iteration cap");
  const double roundoff = 64.0 * kEps * supsum * (1.0 + std::log2(1.0 + g.panels())) *
                          (out.levin ? g.m() : 1.0);
  out.error = remaining + out.pg.resolution_error * std::exp(std::min(q, 700.0)) / az + roundoff;
  return out;
}

cd free_p(double gamma, cd zeta, double x) {
  const cd z = 2.0 * I * zeta * x;
  return 0.5 * (std::exp(z) + 1.0) + gamma * x * expm1_over(z);
}

cd free_dp(double gamma, cd zeta, double x) { return (gamma + I * zeta) * std::exp(2.0 * I * zeta * x); }

RegularSeries solve_p_series(const Potential& v, double gamma, cd zeta, double x_end, double tol,
                             int max_iter) {
  const double az = std::abs(zeta);
  if (az == 0.0) fail(ErrorCode::SmallZeta, "Volterra series needs zeta != 0");
  RegularSeries out{potential_grid(v, x_end, 2.0 / az), {}, {}, 0, 0.0};
  const auto& g = out.pg.grid;
  const std::size_t n = g.size();
  ExpKernel kernel(g, zeta, false);
  const auto xs = g.all_nodes();
  const double A = v.tail_abs(0.0);
  const double q = A / az;
  const double pref = 1.0 + std::abs(gamma) / az;
  // second bound: the Picard majorant with the x and gamma weights
  const double ag = std::abs(gamma);
  const double qg = ag > 0.0 ? (A + ag * v.tail_abs_moment(0.0)) / ag : x_end * A;
  const double prefg = ag > 0.0 ? x_end * ag : 1.0;
  auto remainder = [&](int k) {
    return std::min(pref * exp_series_remainder(q, k), prefg * exp_series_remainder(qg, k));
  };

  out.delta.assign(n, 0.0);
  out.ddelta.assign(n, 0.0);
  std::vector<cd> pn(n), f(n), F, G;
  double supsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pn[i] = free_p(gamma, zeta, xs[i]);
    supsum = std::max(supsum, std::abs(pn[i]));
  }
  const cd inv2iz = 1.0 / (2.0 * I * zeta);
  double remaining = remainder(0);
  bool converged = remaining < 0.1 * tol;
  for (int it = 1; it <= max_iter && !converged; ++it) {
    for (std::size_t i = 0; i < n; ++i) f[i] = out.pg.v[i] * pn[i];
    kernel.forward(f, F, G);
    for (std::size_t i = 0; i < n; ++i) {
      pn[i] = (F[i] - G[i]) * inv2iz;
      out.delta[i] += pn[i];
      out.ddelta[i] += F[i];
    }
    supsum += sup_norm(pn) * std::max(1.0, 1.0 / (az * std::max(x_end, 1e-300)));
    out.iterations = it;
    remaining = remainder(it);
    if (remaining < 0.1 * tol) converged = true;
  }
  if (!converged)
    fail(ErrorCode::NonConverged, "Volterra iteration did not meet its majorant within the iteration cap");
  const double roundoff = 64.0 * kEps * supsum * (1.0 + std::log2(1.0 + g.panels()));
  out.error = remaining + pref * out.pg.resolution_error * std::exp(std::min(q, 700.0)) / az + roundoff;
  return out;
}

double jost_defect(const Potential& v, cd zeta, double x_max) {
  const double az = std::abs(zeta);
  const double m = std::expm1(std::min(v.tail_abs_moment(x_max), 700.0));
  if (az == 0.0) return m;
  return std::min(std::expm1(std::min(v.tail_abs(x_max) / az, 700.0)), m);
}

double jost_x_max(const Potential& v, cd zeta, double tol) {
  const double az = std::abs(zeta);
  double X = v.truncation_point(0.1 * tol * std::max(az, 1.0));
  if (X == 0.0) return 0.0;
  while (jost_defect(v, zeta, X) > 0.1 * tol) {
    X *= 1.25;
    if (X > 1e6) fail(ErrorCode::DecayTooWeak, "no admissible start for backward integration");
  }
  return X;
}

JostOde solve_b_ode(const Potential& v, cd zeta, std::span<const double> targets, double x_max,
                    double tol, bool sensitivity) {
  JostOde out;
  OdeOptions opt;
  opt.rtol = 1e-3 * tol;
  opt.atol = 1e-3 * tol;
  const double az = std::abs(zeta);
  const double kappa = zeta.imag();
  const cd k2 = 2.0 * I * zeta;
  auto audit = [&](double x, cd beta, cd dbeta, double slack) {
    const double damp = std::exp(-kappa * x);
    out.audit.record(damp * std::abs(beta), jost_bound(v, zeta, x), damp * slack);
    out.audit.record(damp * std::abs(I * zeta * beta + dbeta), jost_derivative_bound(v, zeta, x),
                     damp * slack * (1.0 + az));
  };
  const double defect = jost_defect(v, zeta, x_max);
  const double slack_base = defect + 10.0 * tol;
  if (sensitivity) {
    auto rhs = [&](double x, const CState<4>& y) {
      const double V = v(x);
      return CState<4>{y[1], -k2 * y[1] + V * (1.0 + y[0]), y[3],
                       -2.0 * I * y[1] - k2 * y[3] + V * y[2]};
    };
    auto res = integrate_dop853<4>(rhs, x_max, CState<4>{}, targets, opt,
                                   [&](double x, const CState<4>& y) { audit(x, y[0], y[1], slack_base); });
    for (const auto& s : res.states) {
      out.beta.push_back(s[0]);
      out.dbeta.push_back(s[1]);
      out.sbeta.push_back(s[2]);
      out.sdbeta.push_back(s[3]);
    }
    out.steps = res.accepted;
    out.error = 10.0 * res.error_estimate;
  } else {
    auto rhs = [&](double x, const CState<2>& y) {
      return CState<2>{y[1], -k2 * y[1] + v(x) * (1.0 + y[0])};
    };
    auto res = integrate_dop853<2>(rhs, x_max, CState<2>{}, targets, opt,
                                   [&](double x, const CState<2>& y) { audit(x, y[0], y[1], slack_base); });
    for (const auto& s : res.states) {
      out.beta.push_back(s[0]);
      out.dbeta.push_back(s[1]);
    }
    out.steps = res.accepted;
    out.error = 10.0 * res.error_estimate;
  }
  // a relative defect in the start data propagates at most with the growth of b
  // (the first-moment form stays finite as zeta -> 0)
  double growth = (1.0 + x_max) * std::exp(std::min(v.tail_abs_moment(0.0), 50.0));
  if (az > 0.0) growth = std::min(growth, std::exp(std::min(v.tail_abs(0.0) / az, 50.0)));
  out.error += 2.0 * defect * growth + 1e3 * kEps;
  return out;
}

RegularOde solve_p_ode(const Potential& v, double gamma, cd zeta, std::span<const double> targets,
                       double tol) {
  RegularOde out;
  OdeOptions opt;
  opt.rtol = 1e-3 * tol;
  opt.atol = 1e-3 * tol;
  const cd k2 = 2.0 * I * zeta;
  const double kappa = zeta.imag();
  auto rhs = [&](double x, const CState<3>& y) {
    const cd src = v(x) * (free_p(gamma, zeta, x) + y[0]);
    return CState<3>{y[1], k2 * y[1] + src, src};
  };
  auto observe = [&](double x, const CState<3>& y) {
    const double grow = std::exp(std::min(kappa * x, 700.0));
    const double bound = gamma != 0.0 ? regular_bound(v, gamma, zeta, x) : regular_bound_neumann(v, zeta, x);
    out.audit.record(grow * std::abs(y[0]), bound, grow * 10.0 * tol * (1.0 + std::abs(y[0])));
  };
  auto res = integrate_dop853<3>(rhs, 0.0, CState<3>{}, targets, opt, observe);
  for (const auto& s : res.states) {
    out.delta.push_back(s[0]);
    out.ddelta.push_back(s[1]);
  }
  out.integral = res.states.empty() ? cd{} : res.states.back()[2];
  out.steps = res.accepted;
  out.error = 10.0 * res.error_estimate + 1e3 * kEps;
  return out;
}

}  // namespace halfline::detail
