#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace halfline {

// Chebyshev-Lobatto collocation on [-1,1], nodes ascending.
class ChebyshevRule {
 public:
  explicit ChebyshevRule(int m);

  // Shared 20-point rule used by the panel solvers.
  static const ChebyshevRule& standard();

  int size() const { return m_; }
  const std::vector<double>& nodes() const { return t_; }
  // (cumulative * f)_i = integral of the interpolant from -1 to t_i
  double cumulative(int i, int j) const { return cum_[i * m_ + j]; }
  double weight(int j) const { return cum_[(m_ - 1) * m_ + j]; }
  double diff(int i, int j) const { return diff_[i * m_ + j]; }
  double coeff(int k, int j) const { return coef_[k * m_ + j]; }

  // Largest of the two highest Chebyshev coefficients of the interpolant.
  double tail_coefficient(std::span<const double> values) const;

  template <class T>
  T interpolate(std::span<const T> values, double t) const {
    T num{};
    double den = 0.0;
    for (int j = 0; j < m_; ++j) {
      const double d = t - t_[j];
      if (d == 0.0) return values[j];
      const double q = bary_[j] / d;
      num += values[j] * q;
      den += q;
    }
    return num / den;
  }

 private:
  int m_;
  std::vector<double> t_, bary_, cum_, diff_, coef_;
};

// Piecewise Chebyshev grid on [breaks.front(), breaks.back()].
class PanelGrid {
 public:
  PanelGrid(std::vector<double> breaks, const ChebyshevRule& rule = ChebyshevRule::standard());

  // Splits [x0,x1] into pieces no wider than max_width, then bisects any piece
  // flagged by needs_split until it is accepted or min_width is reached.
  static PanelGrid build(std::vector<double> anchors, double max_width,
                         const std::function<bool(double, double)>& needs_split,
                         double min_width = 1e-6,
                         const ChebyshevRule& rule = ChebyshevRule::standard());

  int panels() const { return static_cast<int>(breaks_.size()) - 1; }
  int m() const { return rule_->size(); }
  std::size_t size() const { return static_cast<std::size_t>(panels()) * m(); }
  std::size_t index(int p, int j) const { return static_cast<std::size_t>(p) * m() + j; }
  double left(int p) const { return breaks_[p]; }
  double right(int p) const { return breaks_[p + 1]; }
  double width(int p) const { return breaks_[p + 1] - breaks_[p]; }
  double node(int p, int j) const {
    return 0.5 * (breaks_[p] + breaks_[p + 1]) + 0.5 * width(p) * rule_->nodes()[j];
  }
  double end() const { return breaks_.back(); }
  const std::vector<double>& breaks() const { return breaks_; }
  const ChebyshevRule& rule() const { return *rule_; }
  std::vector<double> all_nodes() const;
  int locate(double x) const;

  template <class T>
  T interpolate(const std::vector<T>& values, double x) const {
    const int p = locate(x);
    const double t = (2.0 * x - breaks_[p] - breaks_[p + 1]) / width(p);
    return rule_->interpolate(std::span<const T>(values.data() + index(p, 0), m()), t);
  }

  // Clenshaw-Curtis integral of grid values over the whole grid.
  template <class T>
  T integrate(const std::vector<T>& values) const {
    T s{};
    for (int p = 0; p < panels(); ++p) {
      T ps{};
      for (int j = 0; j < m(); ++j) ps += values[index(p, j)] * rule_->weight(j);
      s += ps * (0.5 * width(p));
    }
    return s;
  }

 private:
  std::vector<double> breaks_;
  const ChebyshevRule* rule_;
};

}  // namespace halfline
