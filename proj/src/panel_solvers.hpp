#pragma once

// Spectral Volterra solvers on piecewise Chebyshev grids. Internal to the library.

#include <complex>
#include <vector>

#include "halfline/chebyshev.hpp"
#include "halfline/potential.hpp"
#include "halfline/wave_solutions.hpp"
#include <span>

namespace halfline::detail {

using cd = std::complex<double>;

struct PotentialGrid {
  PanelGrid grid;
  std::vector<double> v;      // V at the nodes
  double resolution_error;    // sum over panels of h * (highest Chebyshev coefficients of V)
};

// Panels resolve V on [0, x_end]; if osc_width > 0 they are also no wider than osc_width.
PotentialGrid potential_grid(const Potential& v, double x_end, double osc_width);

// Exponential kernels on a fixed grid; the phase factors are computed once.
class ExpKernel {
 public:
  ExpKernel(const PanelGrid& g, cd zeta, bool levin);

  // Node-wise integrals over [x_i, end]:
  //   E_i = int e^{2 i zeta (y - x_i)} f(y) dy,  T_i = int f(y) dy.
  void backward(const std::vector<cd>& f, std::vector<cd>& E, std::vector<cd>& T) const;
  // Node-wise integrals over [0, x_i]:
  //   F_i = int e^{2 i zeta (x_i - y)} f(y) dy,  G_i = int f(y) dy.
  void forward(const std::vector<cd>& f, std::vector<cd>& F, std::vector<cd>& G) const;

 private:
  const PanelGrid* g_;
  cd zeta_;
  bool levin_;
  std::vector<cd> up_, down_, to_right_, from_left_;
  std::vector<double> right_cum_;  // w_j - L_ij
};

struct JostSeries {
  PotentialGrid pg;
  std::vector<cd> beta, dbeta;  // b - 1 and b' at the nodes
  int iterations = 0;
  double error = 0.0;           // bound on |b - 1 - beta| (uniform in x)
  bool levin = false;
};

// Sum of b_n, n >= 1, on [0, x_end].
JostSeries solve_b_series(const Potential& v, cd zeta, double x_end, double tol, int max_iter);

struct RegularSeries {
  PotentialGrid pg;
  std::vector<cd> delta, ddelta;  // p - p0 and p' - p0' at the nodes, p = e^{i zeta x} phi
  int iterations = 0;
  double error = 0.0;             // bound on |p - p0 - delta|
};

RegularSeries solve_p_series(const Potential& v, double gamma, cd zeta, double x_end, double tol,
                             int max_iter);

// Remainder sum_{j > n} q^j / j!
double exp_series_remainder(double q, int n);

// Smallest admissible start for backward integration.
double jost_x_max(const Potential& v, cd zeta, double tol);
// Initial-data defect bound |b(x_max) - 1|.
double jost_defect(const Potential& v, cd zeta, double x_max);

struct JostOde {
  std::vector<cd> beta, dbeta;    // b - 1 and b' at the targets
  std::vector<cd> sbeta, sdbeta;  // d/dzeta of the above, when requested
  double error = 0.0;
  long steps = 0;
  BoundAudit audit;
};

// Backward integration of b'' = -2 i zeta b' + V b from x_max; targets descending.
JostOde solve_b_ode(const Potential& v, cd zeta, std::span<const double> targets, double x_max,
                    double tol, bool sensitivity);

struct RegularOde {
  std::vector<cd> delta, ddelta;  // p - p0, p' - p0' at the targets
  cd integral;                    // int_0^{last target} V p
  double error = 0.0;
  long steps = 0;
  BoundAudit audit;
};

// Forward integration of p'' = 2 i zeta p' + V p; targets ascending.
RegularOde solve_p_ode(const Potential& v, double gamma, cd zeta, std::span<const double> targets,
                       double tol);

cd free_p(double gamma, cd zeta, double x);
cd free_dp(double gamma, cd zeta, double x);

}  // namespace halfline::detail
