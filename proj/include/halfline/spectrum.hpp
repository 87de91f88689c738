#pragma once

#include <optional>
#include <string>
#include <vector>

#include "halfline/jost_function.hpp"
#include "halfline/potential.hpp"

namespace halfline {

struct EigenvalueSet {
  std::vector<double> lambdas;    // ascending, all < 0
  std::vector<double> kappas;     // lambda = -kappa^2
  std::vector<double> residuals;  // |w(i kappa)| after polishing
  std::vector<double> slopes;     // |w'(i kappa)|
  std::vector<double> errors;     // error estimate of each kappa
  int count = 0;
  std::optional<double> h0_eigenvalue;  // -gamma^2 for gamma < 0
  double kappa_min = 0.0, kappa_max = 0.0;
  bool near_kappa_max = false;  // an eigenvalue within 5% of kappa_max
  int scan_points = 0;
  int refinements = 0;
  BoundAudit audit;
};

struct EigenOptions {
  std::optional<double> kappa_max;  // default sqrt(sup V-) + |gamma| + 1
  double kappa_min = 1e-4;
  int points_per_decade = 64;
  int max_refinements = 3;
  double tolerance = 1e-13;
  std::optional<int> expected_count;  // compared against the roots found
  bool check_levinson = true;         // compute expected_count when not given
};

double default_kappa_max(const Potential& v, double gamma);

EigenvalueSet find_eigenvalues(const Potential& v, double gamma, const EigenOptions& opt = {});

struct FdResult {
  std::vector<double> eigenvalues;  // Richardson-extrapolated, ascending
  std::vector<double> coarse, fine;  // at n and 2n
  std::vector<double> errors;        // |fine - coarse| / 3
};

// Negative eigenvalues of the finite-difference operator on [0, L] with a ghost
// point for the Robin condition and Dirichlet at L.
std::vector<double> fd_negative_eigenvalues(const Potential& v, double gamma, double L, int n);
FdResult fd_oracle(const Potential& v, double gamma, double L = 40.0, int n = 8000);

enum class LevinsonCase { Regular, Resonant };

struct LevinsonReport {
  double shift = 0.0;  // eta(inf) - eta(0)
  double eta_zero = 0.0;
  bool resonant = false;
  double w_at_zero = 0.0;
  int count = 0;             // N implied by the shift
  double offset = 0.0;       // case offset c in shift = pi (N + c)
  double distance = 0.0;     // |shift/pi - (N + c)|
  std::string case_label;    // e.g. "w(0)!=0, gamma>0: pi N"
};

// Offset c with eta(inf) - eta(0) = pi (N + c).
double levinson_offset(double gamma, bool resonant);

LevinsonReport levinson_from(double eta_zero, double gamma, const ResonanceReport& res, double tolerance = 1e-3);
LevinsonReport levinson_count(const Potential& v, double gamma, const AdaptivePhaseOptions& opt = {});

}  // namespace halfline
