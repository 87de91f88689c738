#include "halfline/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "halfline/errors.hpp"

namespace halfline {

ChebyshevRule::ChebyshevRule(int m) : m_(m) {
  if (m < 3) fail(ErrorCode::InvalidArgument, "Chebyshev rule needs at least 3 nodes");
  const int n = m - 1;
  using ld = long double;
  const ld pi = std::numbers::pi_v<long double>;
  t_.resize(m);
  std::vector<ld> theta(m), tl(m);
  for (int i = 0; i < m; ++i) {
    theta[i] = pi * (n - i) / n;  // ascending t = cos(theta)
    tl[i] = std::cos(theta[i]);
    t_[i] = static_cast<double>(tl[i]);
  }
  t_[0] = -1.0;
  t_[n] = 1.0;
  if (n % 2 == 0) t_[n / 2] = 0.0;

  bary_.resize(m);
  for (int j = 0; j < m; ++j) bary_[j] = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == n) ? 0.5 : 1.0);

  // values -> coefficients of sum_k a_k T_k
  std::vector<ld> C(m * m);
  for (int k = 0; k <= n; ++k) {
    for (int j = 0; j <= n; ++j) {
      ld w = (j == 0 || j == n) ? 0.5L : 1.0L;
      ld c = 2.0L / n * w * std::cos(k * theta[j]);
      if (k == 0 || k == n) c *= 0.5L;
      C[k * m + j] = c;
    }
  }
  coef_.assign(m * m, 0.0);
  for (int i = 0; i < m * m; ++i) coef_[i] = static_cast<double>(C[i]);

  // antiderivative coefficients A_1..A_{n+1}, evaluated relative to t=-1
  cum_.assign(m * m, 0.0);
  for (int j = 0; j < m; ++j) {
    std::vector<ld> a(m + 2, 0.0L), A(m + 2, 0.0L);
    for (int k = 0; k <= n; ++k) a[k] = C[k * m + j];
    for (int k = 1; k <= n + 1; ++k) {
      const ld lower = (k == 1) ? 2.0L * a[0] : a[k - 1];
      A[k] = (lower - a[k + 1]) / (2.0L * k);
    }
    ld at_minus_one = 0.0L;
    for (int k = 1; k <= n + 1; ++k) at_minus_one += (k % 2 ? -A[k] : A[k]);
    for (int i = 0; i < m; ++i) {
      ld s = 0.0L;
      for (int k = 1; k <= n + 1; ++k) s += A[k] * std::cos(k * theta[i]);
      cum_[i * m + j] = static_cast<double>(s - at_minus_one);
    }
  }

  diff_.assign(m * m, 0.0);
  for (int i = 0; i < m; ++i) {
    ld rowsum = 0.0L;
    const ld ci = (i == 0 || i == n) ? 2.0L : 1.0L;
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const ld cj = (j == 0 || j == n) ? 2.0L : 1.0L;
      const ld sign = ((i + j) % 2) ? -1.0L : 1.0L;
      const ld d = ci / cj * sign / (tl[i] - tl[j]);
      diff_[i * m + j] = static_cast<double>(d);
      rowsum += d;
    }
    diff_[i * m + i] = static_cast<double>(-rowsum);
  }
}

const ChebyshevRule& ChebyshevRule::standard() {
  static const ChebyshevRule rule(20);
  return rule;
}

double ChebyshevRule::tail_coefficient(std::span<const double> values) const {
  double worst = 0.0;
  for (int k = m_ - 2; k < m_; ++k) {
    double a = 0.0;
    for (int j = 0; j < m_; ++j) a += coef_[k * m_ + j] * values[j];
    worst = std::max(worst, std::abs(a));
  }
  return worst;
}

PanelGrid::PanelGrid(std::vector<double> breaks, const ChebyshevRule& rule)
    : breaks_(std::move(breaks)), rule_(&rule) {
  if (breaks_.size() < 2) fail(ErrorCode::InvalidArgument, "panel grid needs two breakpoints");
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    if (!(breaks_[i] > breaks_[i - 1]))
      fail(ErrorCode::InvalidArgument, "panel breakpoints must increase");
}

PanelGrid PanelGrid::build(std::vector<double> anchors, double max_width,
                           const std::function<bool(double, double)>& needs_split,
                           double min_width, const ChebyshevRule& rule) {
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  std::vector<double> out{anchors.front()};
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    const double a = anchors[i - 1], b = anchors[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
    std::vector<std::pair<double, double>> stack;
    for (int k = pieces - 1; k >= 0; --k) {
      const double l = a + (b - a) * k / pieces;
      const double r = (k == pieces - 1) ? b : a + (b - a) * (k + 1) / pieces;
      stack.emplace_back(l, r);
    }
    while (!stack.empty()) {
      auto [l, r] = stack.back();
      stack.pop_back();
      if (r - l > 2.0 * min_width && needs_split && needs_split(l, r)) {
        const double mid = 0.5 * (l + r);
        stack.emplace_back(mid, r);
        stack.emplace_back(l, mid);
        continue;
      }
      out.push_back(r);
    }
  }
  return PanelGrid(std::move(out), rule);
}

std::vector<double> PanelGrid::all_nodes() const {
  std::vector<double> x(size());
  for (int p = 0; p < panels(); ++p)
    for (int j = 0; j < m(); ++j) x[index(p, j)] = node(p, j);
  return x;
}

int PanelGrid::locate(double x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  int p = static_cast<int>(it - breaks_.begin()) - 1;
  return std::clamp(p, 0, panels() - 1);
}

}  // namespace halfline
