#include "halfline/trace_identities.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>

#include "halfline/errors.hpp"
#include "halfline/quadrature.hpp"

namespace halfline {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kLedgerOrder = 8;

double ell_at(std::span<const double> ell, int j) {
  return j < static_cast<int>(ell.size()) ? ell[j] : std::numeric_limits<double>::quiet_NaN();
}

double sign_pow(int j) { return j % 2 == 0 ? 1.0 : -1.0; }

// Regularizing polynomial of ln a with n terms: sum_{j=1}^n (-1)^j l_{2j} (2k)^{-2j}.
double log_a_subtraction(double k, std::span<const double> ell, int n) {
  double s = 0.0;
  for (int j = 1; j <= n; ++j) s += sign_pow(j) * ell_at(ell, 2 * j) * std::pow(2.0 * k, -2 * j);
  return s;
}

// sum_{j=0}^{n-1} (-1)^{j+1} l_{2j+1} (2k)^{-2j-1}
double eta_subtraction(double k, std::span<const double> ell, int n) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += sign_pow(j + 1) * ell_at(ell, 2 * j + 1) * std::pow(2.0 * k, -2 * j - 1);
  return s;
}

struct TailSeries {
  double value = 0.0;
  double last = std::numeric_limits<double>::infinity();  // magnitude of the last included term
  int terms = 0;
};

// int_K^inf of the omitted series terms times k^{2n}; for F (even) or G (odd) integrands.
TailSeries tail_F(double K, std::span<const double> ell, int n) {
  TailSeries t;
  for (int j = n + 1; 2 * j < static_cast<int>(ell.size()); ++j) {
    const int p = 2 * j - 2 * n - 1;
    const double term = sign_pow(j) * ell[2 * j] * std::pow(2.0, -2 * j) * std::pow(K, -p) / p;
    t.value += term;
    t.last = std::abs(term);
    ++t.terms;
  }
  return t;
}

TailSeries tail_G(double K, std::span<const double> ell, int n) {
  TailSeries t;
  for (int j = n; 2 * j + 1 < static_cast<int>(ell.size()); ++j) {
    const int p = 2 * j + 1 - 2 * n;
    const double term = sign_pow(j + 1) * ell[2 * j + 1] * std::pow(2.0, -2 * j - 1) * std::pow(K, -p) / p;
    t.value += term;
    t.last = std::abs(term);
    ++t.terms;
  }
  return t;
}

// Integrand in t = ln k together with its point-error level and the series prediction.
struct Point {
  double f, noise, series;
};

template <class Eval>
RegularizedIntegral integrate_table(const PhaseTable& table, Eval&& eval) {
  if (table.panels.empty()) fail(ErrorCode::InvalidArgument, "regularized integrals need an adaptive phase table");
  RegularizedIntegral r;
  for (const auto& p : table.panels) {
    std::array<double, 21> f{}, nz{};
    for (int j = 0; j < 21; ++j) {
      const Point pt = eval(p.first + j);
      f[j] = pt.f;
      nz[j] = pt.noise;
    }
    const auto [kr, ga] = gk21::combine(f, p.t0, p.t1);
    r.table_part += kr;
    r.budget.quadrature += std::abs(kr - ga);
    r.budget.phase += gk21::combine(nz, p.t0, p.t1).first;
  }
  const auto& top = table.panels.back();
  for (int j = 0; j < 21; ++j) {
    const Point pt = eval(top.first + j);
    r.envelope_mismatch = std::max(r.envelope_mismatch, std::abs(pt.f - pt.series));
    r.envelope_noise = std::max(r.envelope_noise, pt.noise);
  }
  r.k_top = table.k_top;
  return r;
}

// int_0^m k^{p-1} (alpha + beta ln k) dk and a bound on the integral of its modulus (m < 1).
std::pair<double, double> log_power_integral(double alpha, double beta, int p, double m) {
  const double mp = std::pow(m, p);
  const double lm = std::log(m);
  const double value = alpha * mp / p + beta * (mp * lm / p - mp / (static_cast<double>(p) * p));
  const double bound = std::abs(alpha) * mp / p + std::abs(beta) * (mp * std::abs(lm) / p + mp / (static_cast<double>(p) * p));
  return {value, bound};
}

}  // namespace

double m_s(double gamma, double s) { return gamma < 0.0 ? std::pow(-gamma, 2.0 * s) : 0.0; }

std::complex<double> m_s(double gamma, std::complex<double> s) {
  return gamma < 0.0 ? std::pow(std::complex<double>(-gamma), 2.0 * s) : std::complex<double>{};
}

RegularizedIntegral regularized_F(const PhaseTable& table, std::span<const double> ell, int n, const StubModel& stub) {
  if (n < 0 || 2 * n >= static_cast<int>(ell.size())) fail(ErrorCode::InvalidArgument, "not enough l coefficients");
  auto eval = [&](std::size_t i) {
    const double k = table.ks[i];
    const double w = std::pow(k, 2 * n + 1);
    const double series = log_a_subtraction(k, ell, static_cast<int>((ell.size() - 1) / 2)) -
                          log_a_subtraction(k, ell, n);
    return Point{(table.log_a[i] - log_a_subtraction(k, ell, n)) * w, table.est_errors[i] * w, series * w};
  };
  RegularizedIntegral r = integrate_table(table, eval);

  // [0, k_min]: ln a ~ alpha + slope ln k, subtraction integrated exactly
  const double m = table.k_min;
  const double alpha = table.log_a_at_k_min - stub.log_a_slope * std::log(m);
  auto [lv, lb] = log_power_integral(alpha, stub.log_a_slope, 2 * n + 1, m);
  double sub = 0.0;
  for (int j = 1; j <= n; ++j) {
    const int p = 2 * n - 2 * j + 1;
    sub += sign_pow(j) * ell[2 * j] * std::pow(2.0, -2 * j) * std::pow(m, p) / p;
  }
  r.stub_part = lv - sub;
  r.budget.quadrature += lb + std::abs(sub) * 1e-15;

  const TailSeries t = tail_F(table.k_top, ell, n);
  r.tail_part = t.value;
  r.budget.tail = (t.terms > 0 ? t.last : 0.0) + r.envelope_mismatch;
  if (t.terms == 0) r.budget.tail = std::numeric_limits<double>::infinity();
  r.value = r.table_part + r.stub_part + r.tail_part;
  return r;
}

RegularizedIntegral regularized_G(const PhaseTable& table, std::span<const double> ell, int n) {
  if (n < 1 || 2 * n - 1 >= static_cast<int>(ell.size())) fail(ErrorCode::InvalidArgument, "not enough l coefficients");
  auto eval = [&](std::size_t i) {
    const double k = table.ks[i];
    const double w = std::pow(k, 2 * n);
    const double series = eta_subtraction(k, ell, static_cast<int>(ell.size() / 2)) - eta_subtraction(k, ell, n);
    return Point{(table.eta_vals[i] - eta_subtraction(k, ell, n)) * w, table.est_errors[i] * w, series * w};
  };
  RegularizedIntegral r = integrate_table(table, eval);

  // [0, k_min]: eta linear between its limit at 0 and the value at k_min
  const double m = table.k_min;
  const double e0 = table.eta_zero, e1 = table.eta_at_k_min;
  const double p = 2.0 * n;
  const double ev = e0 * std::pow(m, p) / p + (e1 - e0) * std::pow(m, p) / (p + 1.0);
  double sub = 0.0;
  for (int j = 0; j < n; ++j) {
    const int q = 2 * n - 2 * j - 1;
    sub += sign_pow(j + 1) * ell[2 * j + 1] * std::pow(2.0, -2 * j - 1) * std::pow(m, q) / q;
  }
  r.stub_part = ev - sub;
  r.budget.quadrature += (std::abs(e0) + std::abs(e1)) * std::pow(m, p) / p;

  const TailSeries t = tail_G(table.k_top, ell, n);
  r.tail_part = t.value;
  r.budget.tail = (t.terms > 0 ? t.last : 0.0) + r.envelope_mismatch;
  if (t.terms == 0) r.budget.tail = std::numeric_limits<double>::infinity();
  r.value = r.table_part + r.stub_part + r.tail_part;
  return r;
}

// ---------------------------------------------------------------------------

TraceContext::TraceContext(Potential v, double gamma, TraceOptions opt)
    : v_(std::move(v)), gamma_(gamma), opt_(std::move(opt)) {
  if (!std::isfinite(gamma_)) fail(ErrorCode::InvalidArgument, "gamma must be finite");
  if (!(opt_.tolerance_scale > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance scale must be positive");
  if (v_.decay_class() < DecayClass::SmoothRapid)
    fail(ErrorCode::DecayTooWeak, "trace identities need a smooth, rapidly decaying potential");
  const double s = opt_.tolerance_scale;
  opt_.phase.integral_tolerance *= s;
  opt_.phase.phase.jost.solve.tolerance = std::max(1e-15, opt_.phase.phase.jost.solve.tolerance * s);
  opt_.eigen.tolerance = std::max(1e-15, opt_.eigen.tolerance * s);
  opt_.tail_tolerance *= s;
  opt_.resonance.tolerance = std::max(1e-15, opt_.resonance.tolerance * s);
  if (opt_.resonance.tol_res) *opt_.resonance.tol_res *= s;
}

const ResonanceReport& TraceContext::resonance() {
  if (!res_) res_ = jost_w_zero(v_, gamma_, opt_.resonance);
  return *res_;
}

const CoefficientLedger& TraceContext::ledger() {
  if (!ledger_) {
    AsymptoticOptions ao;
    ao.experimental = true;
    ledger_ = coefficient_ledger(v_, gamma_, kLedgerOrder, ao);
  }
  return *ledger_;
}

const std::vector<double>& TraceContext::ell() {
  if (ell_.empty()) {
    const auto& led = ledger();
    ell_ = led.ell;
    const auto closed = ell_closed_forms(v_, gamma_);
    for (std::size_t j = 1; j < closed.size() && j < ell_.size(); ++j) ell_[j] = closed[j];
  }
  return ell_;
}

const PhaseTable& TraceContext::phase() {
  if (!phase_) {
    const auto& l = ell();
    phase_ = adaptive_phase_table(v_, gamma_, std::span<const double>(l.data(), std::min<std::size_t>(l.size(), 5)),
                                  opt_.phase);
  }
  return *phase_;
}

const EigenvalueSet& TraceContext::eigenvalues() {
  if (!eig_) {
    EigenOptions eo = opt_.eigen;
    if (!eo.expected_count && eo.check_levinson) {
      // reuse this context's phase table instead of building a second one
      try {
        eo.expected_count = levinson_from(phase().eta_zero, gamma_, resonance()).count;
      } catch (const SolverError&) {
      }
      eo.check_levinson = false;
    }
    eig_ = find_eigenvalues(v_, gamma_, eo);
  }
  return *eig_;
}

BoundAudit TraceContext::audit() {
  BoundAudit a;
  if (phase_) a.merge(phase_->audit);
  if (eig_) a.merge(eig_->audit);
  return a;
}

namespace {

bool is_half_integer(double s) { return std::abs(2.0 * s - std::round(2.0 * s)) < 1e-12 && s > 0.0; }

RegularizedIntegral integral_for(const PhaseTable& t, std::span<const double> ell, double order, double log_a_slope) {
  const int two_s = static_cast<int>(std::lround(2.0 * order));
  if (two_s % 2 == 1) return regularized_F(t, ell, (two_s - 1) / 2, StubModel{log_a_slope});
  return regularized_G(t, ell, two_s / 2);
}

}  // namespace

void TraceContext::ensure_tail(double order) {
  if (std::find(checked_orders_.begin(), checked_orders_.end(), order) != checked_orders_.end()) return;
  phase();
  const auto& l = ell();
  for (;;) {
    const auto r = integral_for(*phase_, l, order, 0.0);
    const int two_s = static_cast<int>(std::lround(2.0 * order));
    const double scale = 1.0 + std::abs(l[std::min<std::size_t>(two_s, l.size() - 1)]);
    // the data above k_top must follow the series, up to its own noise
    if (r.envelope_mismatch <= opt_.tail_tolerance * scale || r.envelope_mismatch <= 4.0 * r.envelope_noise) break;
    const double next = 2.0 * phase_->k_top;
    if (next > opt_.k_top_max)
      fail(ErrorCode::TailNotConverged, "phase data still departs from the asymptotic series at k = " +
                                            std::to_string(phase_->k_top));
    extend_phase_table(*phase_, v_, gamma_, std::span<const double>(l.data(), std::min<std::size_t>(l.size(), 5)),
                       next, opt_.phase);
  }
  checked_orders_.push_back(order);
}

TraceReport TraceContext::verify(double order) {
  if (!is_half_integer(order)) fail(ErrorCode::InvalidArgument, "identity order must be a positive multiple of 1/2");
  const bool experimental = order > 2.0;
  if (experimental && !opt_.experimental)
    fail(ErrorCode::OrderTooHigh, "orders above 2 are experimental; enable them explicitly");
  const int two_s = static_cast<int>(std::lround(2.0 * order));
  const auto& l = ell();
  if (two_s >= static_cast<int>(l.size()))
    fail(ErrorCode::OrderTooHigh, "order needs l_" + std::to_string(two_s) + ", beyond the coefficient ledger");

  ensure_tail(order);
  const auto& eig = eigenvalues();
  const auto& res = resonance();

  TraceReport rep;
  rep.potential_spec = v_.spec();
  rep.gamma = gamma_;
  rep.order = order;
  rep.experimental = experimental;
  rep.budget_multiplier = opt_.budget_multiplier;

  double sum = 0.0;
  for (std::size_t j = 0; j < eig.kappas.size(); ++j) {
    const double kap = eig.kappas[j];
    sum += std::pow(kap, two_s);
    rep.budget.eigenvalue += two_s * std::pow(kap, two_s - 1) * eig.errors[j];
  }
  const double ms = opt_.include_m_s ? m_s(gamma_, order) : 0.0;
  rep.lhs_discrete = sum - ms;
  rep.budget.eigenvalue += 4.0 * std::numeric_limits<double>::epsilon() * (sum + ms);

  // ln a ~ slope ln k near k = 0
  const double slope = (res.is_resonant ? 1.0 : 0.0) - (gamma_ == 0.0 ? 1.0 : 0.0);
  rep.integral = integral_for(*phase_, l, order, slope);
  rep.k_top = rep.integral.k_top;

  double prefactor, rhs;
  if (two_s % 2 == 1) {
    const int n = (two_s - 1) / 2;
    prefactor = sign_pow(n + 1) * (2.0 * n + 1.0) / kPi;
    rhs = (2.0 * n + 1.0) * std::pow(2.0, -(2 * n + 2)) * l[2 * n + 1];
  } else {
    const int n = two_s / 2;
    prefactor = sign_pow(n) * 2.0 * n / kPi;
    rhs = -n * std::pow(2.0, -2 * n) * l[2 * n];
  }
  rep.lhs_continuum = prefactor * rep.integral.value;
  rep.rhs = rhs + 0.0;  // no negative zero in reports
  rep.residual = rep.lhs_discrete + rep.lhs_continuum - rep.rhs;
  const double pf = std::abs(prefactor);
  rep.budget.quadrature = pf * rep.integral.budget.quadrature;
  rep.budget.tail = pf * rep.integral.budget.tail;
  rep.budget.phase = pf * rep.integral.budget.phase;
  rep.pass = std::abs(rep.residual) <= rep.budget_multiplier * rep.budget.total();
  return rep;
}

LevinsonCheck TraceContext::levinson() {
  const auto& res = resonance();
  if (res.ambiguous)
    fail(ErrorCode::CaseUndetermined, "|w(0)| = " + std::to_string(std::abs(res.w_at_zero)) +
                                          " is within a factor 2 of the resonance threshold");
  LevinsonCheck c;
  const auto& t = phase();
  c.eigen_count = eigenvalues().count;
  auto& r = c.report;
  r.eta_zero = t.eta_zero;
  r.shift = -t.eta_zero;
  r.resonant = res.is_resonant;
  r.w_at_zero = res.w_at_zero;
  r.offset = levinson_offset(gamma_, res.is_resonant);
  const double n = r.shift / kPi - r.offset;
  r.count = static_cast<int>(std::round(n));
  r.distance = std::abs(n - std::round(n));
  try {
    r.case_label = levinson_from(t.eta_zero, gamma_, res, 0.5).case_label;
  } catch (const SolverError&) {
    r.case_label = res.is_resonant ? "w(0)=0" : "w(0)!=0";
  }
  c.expected_shift = kPi * (c.eigen_count + r.offset);
  c.deviation = std::abs(r.shift - c.expected_shift) / kPi;
  c.pass = c.deviation <= opt_.levinson_tolerance;
  return c;
}

TraceReport verify_identity(const Potential& v, double gamma, double order, const TraceOptions& opt) {
  TraceContext ctx(v, gamma, opt);
  return ctx.verify(order);
}

LevinsonCheck verify_levinson(const Potential& v, double gamma, const TraceOptions& opt) {
  TraceContext ctx(v, gamma, opt);
  return ctx.levinson();
}

std::vector<MatrixCell> acceptance_matrix() {
  std::vector<MatrixCell> cells;
  for (const char* p : {"exp:1,1", "exp:-3,2", "gauss:-2,1", "bump:-4,2"})
    for (double g : {-1.0, 0.0, 1.0}) cells.push_back({p, g});
  return cells;
}

std::vector<CellResult> run_matrix(const std::vector<MatrixCell>& cells, const std::vector<double>& orders,
                                   const TraceOptions& opt) {
  auto run_cell = [&orders, &opt](MatrixCell cell) {
    CellResult out;
    out.cell = cell;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      TraceContext ctx(parse_potential(cell.potential_spec), cell.gamma, opt);
      for (double s : orders) out.reports.push_back(ctx.verify(s));
      out.levinson = ctx.levinson();
      out.audit = ctx.audit();
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  };
  std::vector<std::future<CellResult>> jobs;
  for (const auto& c : cells) jobs.push_back(std::async(std::launch::async, run_cell, c));
  std::vector<CellResult> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace halfline
