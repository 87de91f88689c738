#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "halfline/potential.hpp"

namespace halfline {

using cplx = std::complex<double>;

// zeta with Im zeta >= 0; energy z = zeta^2.
struct SpectralPoint {
  cplx zeta;
  bool on_real_axis = false;
  bool on_imaginary_axis = false;

  static SpectralPoint from_zeta(cplx zeta);
  // Branch arg(zeta) in [0, pi].
  static SpectralPoint from_energy(cplx z);
  cplx energy() const { return zeta * zeta; }
};

enum class WaveKind { Regular, Jost };
enum class SolveMethod { VolterraSeries, DirectIntegration, BIteration, BackwardIntegration };
std::string_view to_string(WaveKind k);
std::string_view to_string(SolveMethod m);

struct WaveSample {
  double x = 0.0;
  cplx value, derivative;
  WaveKind kind = WaveKind::Regular;
  double est_error = 0.0;
  // value minus the free solution, computed without cancellation
  cplx free_deviation;
};

// Majorant checks performed along a solve.
struct BoundAudit {
  long checked = 0;
  long violated = 0;
  double worst_ratio = 0.0;  // max deviation / (bound + slack) over checked points

  void record(double deviation, double bound, double slack);
  void merge(const BoundAudit& o);
};

struct ProbeResidual {
  double x = 0.0;
  double residual = 0.0;  // |u'' - (V - zeta^2) u| / (1 + |V| + |zeta|^2) / max(|u|, tiny)
};

struct SolveReport {
  SolveMethod method = SolveMethod::VolterraSeries;
  long iterations = 0;  // Picard terms or accepted steps
  double x_max = 0.0;
  std::vector<ProbeResidual> residuals;
  BoundAudit audit;
};

struct SolveOptions {
  double tolerance = 1e-10;
  double small_zeta_cutoff = 0.5;
  int max_iterations = 400;
  bool probe_residuals = false;
  std::optional<double> x_max;  // backward integration start; automatic if empty
};

struct WaveSolution {
  std::vector<WaveSample> samples;
  SolveReport report;
};

// Regular solution phi(0)=1, phi'(0)=gamma by Picard iteration of the Volterra equation.
WaveSolution regular_volterra(const Potential& v, double gamma, const SpectralPoint& zeta,
                              std::span<const double> xs, const SolveOptions& opt = {});
// Same solution by adaptive integration of the ODE from x=0.
WaveSolution regular_direct(const Potential& v, double gamma, const SpectralPoint& zeta,
                            std::span<const double> xs, const SolveOptions& opt = {});
// Jost solution theta ~ e^{i zeta x} by successive approximation of b = e^{-i zeta x} theta.
WaveSolution jost_b_iteration(const Potential& v, const SpectralPoint& zeta, std::span<const double> xs,
                              const SolveOptions& opt = {});
// Jost solution by backward integration from x_max; also valid at zeta = 0.
WaveSolution jost_backward(const Potential& v, const SpectralPoint& zeta, std::span<const double> xs,
                           const SolveOptions& opt = {});

// Right sides of the majorants. All return +inf where the bound degenerates.
// |phi - phi0| for gamma != 0.
double regular_bound(const Potential& v, double gamma, cplx zeta, double x);
// |phi - phi0| for gamma = 0.
double regular_bound_neumann(const Potential& v, cplx zeta, double x);
// |theta - e^{i zeta x}|
double jost_bound(const Potential& v, cplx zeta, double x);
// |theta' - i zeta e^{i zeta x}|
double jost_derivative_bound(const Potential& v, cplx zeta, double x);

// Free regular solution and derivative.
cplx free_regular(double gamma, cplx zeta, double x);
cplx free_regular_derivative(double gamma, cplx zeta, double x);

// (e^z - 1)/z without cancellation.
cplx expm1_over(cplx z);

}  // namespace halfline
