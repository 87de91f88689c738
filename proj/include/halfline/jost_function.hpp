#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "halfline/potential.hpp"
#include "halfline/wave_solutions.hpp"

namespace halfline {

enum class JostMethod { Wronskian, IntegralRep };
std::string_view to_string(JostMethod m);

struct JostEvaluation {
  SpectralPoint zeta;
  cplx w, w_dot;
  cplx D;
  cplx D_minus_one;  // D - 1 without cancellation
  JostMethod method = JostMethod::Wronskian;
  double est_error = 0.0;
  std::optional<cplx> w_integral_rep;
  double discrepancy = 0.0;  // |w - w_integral_rep|
  SolveMethod jost_solver = SolveMethod::BIteration;
  BoundAudit audit;
};

struct JostOptions {
  SolveOptions solve;
  bool cross_check = true;
  bool derivative = true;
  double inconsistency_factor = 10.0;
  // the integral representation is skipped when |zeta| * x_max exceeds this
  double max_cross_check_extent = 4000.0;
};

JostEvaluation jost_w(const Potential& v, double gamma, const SpectralPoint& zeta,
                      const JostOptions& opt = {});

struct ResonanceReport {
  double w_at_zero = 0.0;
  double w_at_zero_rep = 0.0;  // from the integral representation
  double est_error = 0.0;
  double tol_res = 0.0;
  bool is_resonant = false;
  bool ambiguous = false;  // |w(0)| within a factor 2 of tol_res
  std::optional<double> w0_slope;
};

struct ResonanceOptions {
  double tolerance = 1e-12;
  std::optional<double> tol_res;  // default 1e-8 (1 + |gamma|)
};

ResonanceReport jost_w_zero(const Potential& v, double gamma, const ResonanceOptions& opt = {});

// log(1 + z) accurate for small z.
cplx log1p_complex(cplx z);

struct PhaseTable {
  std::vector<double> ks;
  std::vector<double> a_vals;
  std::vector<double> log_a;  // ln a without the round trip through a
  std::vector<double> eta_vals;
  std::vector<double> est_errors;  // bound on |ln D| error
  double branch_anchor_k = 0.0;
  double eta_zero = 0.0;  // Richardson extrapolation from k_min and k_min/2
  bool eta_zero_extrapolated = true;
  double eta_at_k_min = 0.0, log_a_at_k_min = 0.0;
  BoundAudit audit;
  long evaluations = 0;

  // Set by the adaptive builder: Gauss-Kronrod panels in t = ln k, 21 nodes each
  // stored contiguously from index `first`.
  struct Panel {
    double t0, t1;
    std::size_t first;
  };
  std::vector<Panel> panels;
  double k_min = 0.0, k_top = 0.0;
};

inline JostOptions phase_jost_defaults() {
  JostOptions o;
  o.solve.tolerance = 1e-13;
  o.derivative = false;
  return o;
}

struct PhaseOptions {
  JostOptions jost = phase_jost_defaults();
  double max_jump = 1.5707963267948966;
  int max_refinement_depth = 30;
  double seed_tolerance = 1e-3;
};

// Phase data on a caller grid.
PhaseTable phase_table(const Potential& v, double gamma, std::span<const double> ks,
                       const PhaseOptions& opt = {});

struct AdaptivePhaseOptions {
  PhaseOptions phase;
  double k_min = 1e-4;
  double k_top = 64.0;
  double integral_tolerance = 1e-11;
  int panels_per_decade = 3;
  int max_panels = 1500;
};

// Phase data on Gauss-Kronrod panels over [k_min, k_top], refined until the
// continuum integrands of the trace identities are resolved. ell holds l_1..l_4.
PhaseTable adaptive_phase_table(const Potential& v, double gamma, std::span<const double> ell,
                                const AdaptivePhaseOptions& opt = {});
// Adds panels up to new_top and re-seeds the branch.
void extend_phase_table(PhaseTable& table, const Potential& v, double gamma, std::span<const double> ell,
                        double new_top, const AdaptivePhaseOptions& opt = {});

// (1/2zeta)(w'/w + i/(gamma - i zeta)) at zeta = sqrt(z).
cplx trace_difference(const Potential& v, double gamma, cplx z, const JostOptions& opt = {});
// int_0^X (R0(y,y;z) - R(y,y;z)) dy from the solution kernels.
cplx resolvent_trace_numeric(const Potential& v, double gamma, cplx z, double X,
                             const SolveOptions& opt = {});

}  // namespace halfline
