#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "halfline/asymptotics.hpp"
#include "halfline/jost_function.hpp"
#include "halfline/potential.hpp"
#include "halfline/spectrum.hpp"

namespace halfline {

// (-gamma)^{2s} for gamma < 0, else 0.
double m_s(double gamma, double s);
std::complex<double> m_s(double gamma, std::complex<double> s);

struct ErrorBudget {
  double quadrature = 0.0;
  double tail = 0.0;
  double eigenvalue = 0.0;
  double phase = 0.0;
  double total() const { return quadrature + tail + eigenvalue + phase; }
};

// A regularized continuum integral over [0, inf).
struct RegularizedIntegral {
  double value = 0.0;
  double table_part = 0.0;  // [k_min, k_top] over the phase panels
  double stub_part = 0.0;   // [0, k_min] from the small-k model
  double tail_part = 0.0;   // [k_top, inf) from the asymptotic series
  ErrorBudget budget;       // eigenvalue component unused
  double k_top = 0.0;
  double envelope_mismatch = 0.0;  // max |data - series| on the top panel
  double envelope_noise = 0.0;     // point-error level of that comparison
};

struct StubModel {
  double log_a_slope = 0.0;  // ln a ~ alpha + slope ln k near 0
};

// F with n even subtractions, evaluated at s = n + 1/2. ell[j] = l_j; entries past
// the subtraction feed the tail.
RegularizedIntegral regularized_F(const PhaseTable& table, std::span<const double> ell, int n,
                                  const StubModel& stub);
// G with n odd subtractions, evaluated at s = n.
RegularizedIntegral regularized_G(const PhaseTable& table, std::span<const double> ell, int n);

struct TraceReport {
  std::string potential_spec;
  double gamma = 0.0;
  double order = 0.0;
  double lhs_discrete = 0.0;   // sum |lambda_j|^s - M_s
  double lhs_continuum = 0.0;  // signed regularized integral term
  double rhs = 0.0;
  double residual = 0.0;       // lhs_discrete + lhs_continuum - rhs
  ErrorBudget budget;
  double budget_multiplier = 5.0;
  bool pass = false;
  bool experimental = false;
  double k_top = 0.0;
  RegularizedIntegral integral;
};

struct LevinsonCheck {
  LevinsonReport report;   // N implied by the phase shift
  int eigen_count = 0;     // N from the eigenvalue search
  double expected_shift = 0.0;
  double deviation = 0.0;  // |shift - expected| / pi
  bool pass = false;
};

struct TraceOptions {
  AdaptivePhaseOptions phase;
  EigenOptions eigen;
  ResonanceOptions resonance;
  double tolerance_scale = 1.0;
  double budget_multiplier = 5.0;
  double tail_tolerance = 1e-8;
  double k_top_max = 4096.0;
  bool experimental = false;  // orders beyond 2
  bool include_m_s = true;    // dropping M_s is only meaningful as a negative control
  double levinson_tolerance = 1e-3;
};

// Everything the identities of one (V, gamma) share.
class TraceContext {
 public:
  TraceContext(Potential v, double gamma, TraceOptions opt = {});

  const Potential& potential() const { return v_; }
  double gamma() const { return gamma_; }
  const ResonanceReport& resonance();
  const PhaseTable& phase();
  const EigenvalueSet& eigenvalues();
  const CoefficientLedger& ledger();
  // l_1..l_4 from the closed forms followed by recurrence values beyond.
  const std::vector<double>& ell();

  TraceReport verify(double order);
  LevinsonCheck levinson();
  BoundAudit audit();

 private:
  void ensure_tail(double order);

  Potential v_;
  double gamma_;
  TraceOptions opt_;
  std::optional<ResonanceReport> res_;
  std::optional<PhaseTable> phase_;
  std::optional<EigenvalueSet> eig_;
  std::optional<CoefficientLedger> ledger_;
  std::vector<double> ell_;
  std::vector<double> checked_orders_;
};

TraceReport verify_identity(const Potential& v, double gamma, double order, const TraceOptions& opt = {});
LevinsonCheck verify_levinson(const Potential& v, double gamma, const TraceOptions& opt = {});

struct MatrixCell {
  std::string potential_spec;
  double gamma = 0.0;
};

struct CellResult {
  MatrixCell cell;
  std::vector<TraceReport> reports;
  std::optional<LevinsonCheck> levinson;
  BoundAudit audit;
  double seconds = 0.0;
  std::string error;  // set when the cell threw
};

// The acceptance grid: four potentials times gamma in {-1, 0, 1}.
std::vector<MatrixCell> acceptance_matrix();
// Runs every cell concurrently; results keep the input order.
std::vector<CellResult> run_matrix(const std::vector<MatrixCell>& cells, const std::vector<double>& orders,
                                   const TraceOptions& opt = {});

}  // namespace halfline
