#include "halfline/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "halfline/chebyshev.hpp"
#include "halfline/errors.hpp"

namespace halfline {

namespace {

struct Boundary {
  std::vector<double> at0, dat0;
  std::vector<std::vector<double>> values, derivs;  // on the caller grid
};

// int_{x_i}^{end} f for every node.
std::vector<double> tail_integrals(const PanelGrid& g, const std::vector<double>& f) {
  const int m = g.m();
  std::vector<double> out(g.size());
  double right = 0.0;
  for (int p = g.panels() - 1; p >= 0; --p) {
    const double h = 0.5 * g.width(p);
    std::vector<double> cum(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) cum[i] += g.rule().cumulative(i, j) * f[g.index(p, j)] * h;
    for (int i = 0; i < m; ++i) out[g.index(p, i)] = right + cum[m - 1] - cum[i];
    right += cum[m - 1];
  }
  return out;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Runs the recurrence with analytic derivative propagation:
//   b_n^{(j)} = -b_{n-1}^{(j+1)} + sum_i C(j-1,i) V^{(j-1-i)} b_{n-1}^{(i)},  j >= 1
//   b_n       = -b_{n-1}' - int_x^inf V b_{n-1}
Boundary run_recurrence(const Potential& v, int n_max, const PanelGrid& g, std::span<const double> x_grid) {
  const auto xs = g.all_nodes();
  const std::size_t N = xs.size();
  const int jmax = n_max + 1;
  std::vector<std::vector<double>> dv(jmax + 1, std::vector<double>(N));
  for (std::size_t i = 0; i < N; ++i) {
    const auto d = v.derivatives(xs[i], jmax);
    for (int j = 0; j <= jmax; ++j) dv[j][i] = d[j];
  }
  // prev[j] = b_{n-1}^{(j)} on the nodes
  std::vector<std::vector<double>> prev(jmax + 2, std::vector<double>(N, 0.0));
  std::fill(prev[0].begin(), prev[0].end(), 1.0);
  Boundary out;
  out.at0.push_back(1.0);
  out.dat0.push_back(0.0);
  out.values.emplace_back(x_grid.size(), 1.0);
  out.derivs.emplace_back(x_grid.size(), 0.0);
  const std::size_t origin = 0;  // the first node is x = 0
  for (int n = 1; n <= n_max; ++n) {
    const int need = n_max - n + 1;  // highest derivative of b_n still required
    std::vector<std::vector<double>> cur(jmax + 2, std::vector<double>(N, 0.0));
    std::vector<double> f(N);
    for (std::size_t i = 0; i < N; ++i) f[i] = dv[0][i] * prev[0][i];
    const auto tail = tail_integrals(g, f);
    for (std::size_t i = 0; i < N; ++i) cur[0][i] = -prev[1][i] - tail[i];
    for (int j = 1; j <= need; ++j) {
      for (std::size_t i = 0; i < N; ++i) {
        double s = -prev[j + 1][i];
        for (int q = 0; q <= j - 1; ++q) s += binom(j - 1, q) * dv[j - 1 - q][i] * prev[q][i];
        cur[j][i] = s;
      }
    }
    out.at0.push_back(cur[0][origin]);
    out.dat0.push_back(cur[1][origin]);
    std::vector<double> vals, ders;
    for (double x : x_grid) {
      if (x >= g.end()) {
        vals.push_back(0.0);
        ders.push_back(0.0);
      } else {
        vals.push_back(g.interpolate(cur[0], x));
        ders.push_back(g.interpolate(cur[1], x));
      }
    }
    out.values.push_back(std::move(vals));
    out.derivs.push_back(std::move(ders));
    prev = std::move(cur);
  }
  return out;
}

PanelGrid recurrence_grid(const Potential& v, int n_max, double tol) {
  const double X = v.truncation_point(tol * std::max(1.0, v.coefficient_scale()));
  const int jmax = n_max + 1;
  // global scale of each derivative
  std::vector<double> scale(jmax + 1, 0.0);
  for (int i = 0; i <= 2000; ++i) {
    const auto d = v.derivatives(X * i / 2000.0, jmax);
    for (int j = 0; j <= jmax; ++j) scale[j] = std::max(scale[j], std::abs(d[j]));
  }
  const auto& rule = ChebyshevRule::standard();
  auto needs_split = [&](double a, double b) {
    std::vector<std::vector<double>> vals(jmax + 1, std::vector<double>(rule.size()));
    for (int k = 0; k < rule.size(); ++k) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes()[k];
      const auto d = v.derivatives(x, jmax);
      for (int j = 0; j <= jmax; ++j) vals[j][k] = d[j];
    }
    for (int j = 0; j <= jmax; ++j)
      if (rule.tail_coefficient(vals[j]) > 1e-15 * scale[j]) return true;
    return false;
  };
  std::vector<double> anchors{0.0, X};
  for (double b : v.breakpoints())
    if (b > 0.0 && b < X) anchors.push_back(b);
  std::sort(anchors.begin(), anchors.end());
  return PanelGrid::build(anchors, std::min(v.length_scale(), X), needs_split, 1e-6 * X);
}

PanelGrid halved(const PanelGrid& g) {
  std::vector<double> b;
  for (int p = 0; p < g.panels(); ++p) {
    b.push_back(g.left(p));
    b.push_back(0.5 * (g.left(p) + g.right(p)));
  }
  b.push_back(g.end());
  return PanelGrid(b, g.rule());
}

}  // namespace

BSequence b_sequence(const Potential& v, int n_max, std::span<const double> x_grid, const AsymptoticOptions& opt) {
  if (n_max < 0) fail(ErrorCode::InvalidArgument, "n_max must be nonnegative");
  if (n_max > kCertifiedOrder && !opt.experimental)
    fail(ErrorCode::OrderTooHigh, "orders above " + std::to_string(kCertifiedOrder) + " need the experimental flag");
  if (v.decay_class() < DecayClass::SmoothRapid)
    fail(ErrorCode::DecayTooWeak, "the high-energy recurrence needs a smooth rapidly decaying potential");
  for (double x : x_grid)
    if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorCode::InvalidArgument, "x must be finite and >= 0");

  BSequence out;
  out.n_max = n_max;
  out.x_grid.assign(x_grid.begin(), x_grid.end());
  if (v.is_zero()) {
    for (int n = 0; n <= n_max; ++n) {
      out.at0.push_back(n == 0 ? 1.0 : 0.0);
      out.dat0.push_back(0.0);
      out.err0.push_back(0.0);
      out.derr0.push_back(0.0);
      out.values.emplace_back(x_grid.size(), n == 0 ? 1.0 : 0.0);
      out.derivs.emplace_back(x_grid.size(), 0.0);
    }
    return out;
  }
  const auto g = recurrence_grid(v, n_max, 1e-3 * opt.tolerance);
  const auto coarse = run_recurrence(v, n_max, g, x_grid);
  const auto fine = run_recurrence(v, n_max, halved(g), x_grid);
  out.at0 = fine.at0;
  out.dat0 = fine.dat0;
  out.values = fine.values;
  out.derivs = fine.derivs;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int n = 0; n <= n_max; ++n) {
    out.err0.push_back(std::abs(fine.at0[n] - coarse.at0[n]) + 16.0 * eps * std::abs(fine.at0[n]));
    out.derr0.push_back(std::abs(fine.dat0[n] - coarse.dat0[n]) + 16.0 * eps * std::abs(fine.dat0[n]));
  }
  return out;
}

std::vector<double> d_coeffs(std::span<const double> b0, std::span<const double> db0, double gamma) {
  if (b0.size() != db0.size() || b0.empty()) fail(ErrorCode::InvalidArgument, "b data sizes disagree");
  const int n_max = static_cast<int>(b0.size()) - 1;
  std::vector<double> d(n_max + 1, 0.0);
  d[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    double s = b0[n];
    double pw = 1.0;  // (2 gamma)^{n-m-1}, starting from m = n-1
    for (int m = n - 1; m >= 1; --m) {
      s += 2.0 * db0[m] * pw;
      pw *= 2.0 * gamma;
    }
    d[n] = s;
  }
  return d;
}

std::vector<double> d_coeffs(const BSequence& b, double gamma) { return d_coeffs(b.at0, b.dat0, gamma); }

std::vector<double> ell_coeffs(std::span<const double> d) {
  if (d.empty()) fail(ErrorCode::InvalidArgument, "empty d sequence");
  const int n_max = static_cast<int>(d.size()) - 1;
  std::vector<double> ell(n_max + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    double s = 0.0;
    for (int j = 1; j <= n - 1; ++j) s += j * d[n - j] * ell[j];
    ell[n] = d[n] - s / n;
  }
  return ell;
}

std::vector<double> ell_closed_forms(const Potential& v, double gamma) {
  const auto& m = v.moments();
  return {0.0,
          -m.integral,
          m.v0,
          4.0 * gamma * m.v0 - m.dv0 + m.integral_sq,
          m.d2v0 - 2.0 * m.v0 * m.v0 - 4.0 * gamma * m.dv0 + 8.0 * gamma * gamma * m.v0};
}

namespace {

double coefficient(std::span<const double> ell, int n) {
  if (n < static_cast<int>(ell.size())) return ell[n];
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

SeriesValue asymptotic_eta(double k, std::span<const double> ell, int n_terms) {
  if (!(k > 0.0)) fail(ErrorCode::InvalidArgument, "k must be positive");
  if (n_terms < 0 || (n_terms > 0 && 2 * n_terms - 1 >= static_cast<int>(ell.size())))
    fail(ErrorCode::InvalidArgument, "not enough coefficients for the requested terms");
  SeriesValue out;
  const double tk = 2.0 * k;
  for (int n = 0; n < n_terms; ++n)
    out.value += ((n % 2 == 0) ? -1.0 : 1.0) * ell[2 * n + 1] * std::pow(tk, -(2 * n + 1));
  const double next = coefficient(ell, 2 * n_terms + 1);
  out.truncation = std::isnan(next) ? std::numeric_limits<double>::infinity()
                                    : std::abs(next) * std::pow(tk, -(2 * n_terms + 1));
  return out;
}

SeriesValue asymptotic_log_a(double k, std::span<const double> ell, int n_terms) {
  if (!(k > 0.0)) fail(ErrorCode::InvalidArgument, "k must be positive");
  if (n_terms < 0 || (n_terms > 0 && 2 * n_terms >= static_cast<int>(ell.size())))
    fail(ErrorCode::InvalidArgument, "not enough coefficients for the requested terms");
  SeriesValue out;
  const double tk = 2.0 * k;
  for (int n = 1; n <= n_terms; ++n) out.value += ((n % 2 == 1) ? -1.0 : 1.0) * ell[2 * n] * std::pow(tk, -2 * n);
  const double next = coefficient(ell, 2 * n_terms + 2);
  out.truncation =
      std::isnan(next) ? std::numeric_limits<double>::infinity() : std::abs(next) * std::pow(tk, -(2 * n_terms + 2));
  return out;
}

CoefficientLedger coefficient_ledger(const Potential& v, double gamma, int n_max, const AsymptoticOptions& opt) {
  CoefficientLedger out;
  out.n_max = n_max;
  out.gamma = gamma;
  out.b = b_sequence(v, n_max, {}, opt);
  out.d = d_coeffs(out.b, gamma);
  out.ell = ell_coeffs(out.d);
  // first-order propagation of the b(0), b'(0) errors
  out.ell_err.assign(n_max + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    for (int which = 0; which < 2; ++which) {
      auto b0 = out.b.at0;
      auto db0 = out.b.dat0;
      const double e = which == 0 ? out.b.err0[n] : out.b.derr0[n];
      if (e == 0.0) continue;
      (which == 0 ? b0 : db0)[n] += e;
      const auto ell = ell_coeffs(d_coeffs(b0, db0, gamma));
      for (int q = 1; q <= n_max; ++q) out.ell_err[q] += std::abs(ell[q] - out.ell[q]);
    }
  }
  out.ell_closed = ell_closed_forms(v, gamma);
  for (int n = 1; n <= std::min(n_max, kCertifiedOrder); ++n)
    out.max_discrepancy = std::max(out.max_discrepancy, std::abs(out.ell[n] - out.ell_closed[n]));
  return out;
}

}  // namespace halfline
