#include "halfline/jost_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "halfline/asymptotics.hpp"
#include "halfline/errors.hpp"
#include "halfline/ode.hpp"
#include "halfline/quadrature.hpp"
#include "panel_solvers.hpp"

namespace halfline {

namespace {

const cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double capped_exp(double x) { return std::exp(std::min(x, 700.0)); }

// b(0) - 1 and b'(0), optionally with their zeta-derivatives.
struct Core {
  cplx beta0, dbeta0;
  cplx sbeta0, sdbeta0;
  double err_beta = 0.0, err_dbeta = 0.0, err_sens = 0.0;
  SolveMethod method = SolveMethod::BIteration;
  BoundAudit audit;
};

Core jost_core(const Potential& v, cplx zeta, const SolveOptions& so, bool sensitivity) {
  Core c;
  const double az = std::abs(zeta);
  const double tol = so.tolerance;
  const bool series = !sensitivity && az >= so.small_zeta_cutoff;
  c.method = series ? SolveMethod::BIteration : SolveMethod::BackwardIntegration;
  if (v.is_zero()) return c;
  if (series) {
    double X = v.truncation_point(0.1 * tol * std::max(az, 1.0));
    if (!(X > 0.0)) X = 1.0;
    const auto s = detail::solve_b_series(v, zeta, X, tol, so.max_iterations);
    c.beta0 = s.beta[0];
    c.dbeta0 = s.dbeta[0];
    const double growth = capped_exp(v.tail_abs(0.0) / az);
    const double cut = v.tail_abs(X) * growth;
    c.err_beta = s.error + cut / az;
    c.err_dbeta = (2.0 * az + 1.0) * s.error + cut;
    const auto& g = s.pg.grid;
    for (int p = 0; p < g.panels(); ++p) {
      const std::size_t i = g.index(p, 0);
      const double x = g.left(p);
      const double damp = std::exp(-zeta.imag() * x);
      const double slack = damp * (s.error + 1e-15);
      c.audit.record(damp * std::abs(s.beta[i]), jost_bound(v, zeta, x), slack);
      c.audit.record(damp * std::abs(I * zeta * s.beta[i] + s.dbeta[i]), jost_derivative_bound(v, zeta, x),
                     slack * (1.0 + az));
    }
  } else {
    const double X = detail::jost_x_max(v, zeta, tol);
    const double origin = 0.0;
    const auto s = detail::solve_b_ode(v, zeta, std::span<const double>(&origin, 1), X, tol, sensitivity);
    c.beta0 = s.beta[0];
    c.dbeta0 = s.dbeta[0];
    if (sensitivity) {
      c.sbeta0 = s.sbeta[0];
      c.sdbeta0 = s.sdbeta[0];
    }
    c.err_beta = s.error;
    c.err_dbeta = s.error * (1.0 + az);
    c.err_sens = s.error * (1.0 + X) * (1.0 + az);
    c.audit = s.audit;
  }
  return c;
}

struct Rep {
  cplx w;
  double err = 0.0;
  bool done = false;
  BoundAudit audit;
};

// w = gamma - i zeta + int V(y) e^{i zeta y} phi(y) dy
Rep integral_rep(const Potential& v, double gamma, cplx zeta, const SolveOptions& so, double max_extent) {
  Rep r;
  const double az = std::abs(zeta);
  const double tol = so.tolerance;
  r.w = gamma - I * zeta;
  if (v.is_zero()) {
    r.done = true;
    return r;
  }
  const double pref = 1.0 + std::abs(gamma) / az;
  const double X = v.truncation_point(0.01 * tol / pref);
  if (az * X > max_extent) return r;
  r.done = true;
  if (az >= so.small_zeta_cutoff) {
    const auto s = detail::solve_p_series(v, gamma, zeta, X, tol, so.max_iterations);
    const auto& g = s.pg.grid;
    const auto xs = g.all_nodes();
    std::vector<cplx> vp(xs.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const cplx p = detail::free_p(gamma, zeta, xs[i]) + s.delta[i];
      sup = std::max(sup, std::abs(p));
      vp[i] = s.pg.v[i] * p;
    }
    r.w += g.integrate(vp);
    r.err = s.error * v.tail_abs(0.0) + (s.pg.resolution_error + 2.0 * v.tail_abs(X)) * sup + 1e3 * 2.2e-16 * sup;
  } else {
    const double target = X;
    const auto s = detail::solve_p_ode(v, gamma, zeta, std::span<const double>(&target, 1), tol);
    const double pX = std::abs(detail::free_p(gamma, zeta, X) + s.delta[0]);
    r.w += s.integral;
    r.err = s.error * (1.0 + X) + 2.0 * v.tail_abs(X) * (pX + 1.0);
    r.audit = s.audit;
  }
  return r;
}

}  // namespace

std::string_view to_string(JostMethod m) { return m == JostMethod::Wronskian ? "WRONSKIAN" : "INTEGRAL_REP"; }

cplx log1p_complex(cplx z) {
  const double x = z.real(), y = z.imag();
  return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
}

JostEvaluation jost_w(const Potential& v, double gamma, const SpectralPoint& sp, const JostOptions& opt) {
  if (!std::isfinite(gamma)) fail(ErrorCode::InvalidArgument, "gamma must be finite");
  const cplx zeta = sp.zeta;
  if (zeta == cplx{}) fail(ErrorCode::InvalidArgument, "zeta = 0 is handled by jost_w_zero");
  if (zeta.imag() < 0.0) fail(ErrorCode::InvalidArgument, "Im zeta must be >= 0");
  JostEvaluation out;
  out.zeta = sp;
  const bool interior = zeta.imag() > 0.0;
  const bool sensitivity = opt.derivative && interior;
  const Core c = jost_core(v, zeta, opt.solve, sensitivity);
  const cplx g = gamma - I * zeta;
  out.w = g * (1.0 + c.beta0) - c.dbeta0;
  out.D = out.w / g;
  out.D_minus_one = c.beta0 - c.dbeta0 / g;
  out.jost_solver = c.method;
  out.audit = c.audit;
  double err = std::abs(g) * c.err_beta + c.err_dbeta;

  if (sensitivity) {
    out.w_dot = -I * (1.0 + c.beta0) + g * c.sbeta0 - c.sdbeta0;
  } else if (opt.derivative) {
    JostOptions sub = opt;
    sub.derivative = false;
    sub.cross_check = false;
    const double k = zeta.real();
    const double h = std::min(1e-3 * std::max(1.0, std::abs(k)), 0.25 * std::abs(k));
    auto wv = [&](double kk) { return jost_w(v, gamma, SpectralPoint::from_zeta(kk), sub).w; };
    const cplx d1 = (wv(k + h) - wv(k - h)) / (2.0 * h);
    const cplx d2 = (wv(k + 0.5 * h) - wv(k - 0.5 * h)) / h;
    out.w_dot = (4.0 * d2 - d1) / 3.0;
  }

  if (opt.cross_check) {
    const Rep r = integral_rep(v, gamma, zeta, opt.solve, opt.max_cross_check_extent);
    if (r.done) {
      out.w_integral_rep = r.w;
      out.discrepancy = std::abs(out.w - r.w);
      out.audit.merge(r.audit);
      if (out.discrepancy > opt.inconsistency_factor * (err + r.err))
        fail(ErrorCode::Inconsistent, "Wronskian and integral representation disagree at zeta = (" +
                                          std::to_string(zeta.real()) + ", " + std::to_string(zeta.imag()) +
                                          "): |diff| = " + std::to_string(out.discrepancy));
      err += out.discrepancy;
    }
  }
  out.est_error = err;
  return out;
}

ResonanceReport jost_w_zero(const Potential& v, double gamma, const ResonanceOptions& opt) {
  if (!std::isfinite(gamma)) fail(ErrorCode::InvalidArgument, "gamma must be finite");
  if (v.decay_class() < DecayClass::FirstMoment)
    fail(ErrorCode::DecayTooWeak, "zero energy needs a finite first moment of |V|");
  ResonanceReport out;
  out.tol_res = opt.tol_res.value_or(1e-8 * (1.0 + std::abs(gamma)));
  const double tol = opt.tolerance;
  double slope = 1.0;
  if (v.is_zero()) {
    out.w_at_zero = gamma;
    out.w_at_zero_rep = gamma;
  } else {
    const double X = detail::jost_x_max(v, 0.0, tol);
    const double origin = 0.0;
    const auto s = detail::solve_b_ode(v, 0.0, std::span<const double>(&origin, 1), X, tol, false);
    out.w_at_zero = (gamma * (1.0 + s.beta[0]) - s.dbeta[0]).real();
    const double err_w = (1.0 + std::abs(gamma)) * s.error;

    // zero-energy regular solution phi = 1 + gamma x + delta with int V phi and int y V phi
    const double Xr = detail::jost_x_max(v, 0.0, 1e-3 * tol / (1.0 + std::abs(gamma)));
    OdeOptions oo;
    oo.rtol = 1e-3 * tol;
    oo.atol = 1e-3 * tol;
    auto rhs = [&](double x, const CState<4>& y) {
      const cplx f = v(x) * (1.0 + gamma * x + y[0]);
      return CState<4>{y[1], f, f, x * f};
    };
    const double target = Xr;
    const auto res = integrate_dop853<4>(rhs, 0.0, CState<4>{}, std::span<const double>(&target, 1), oo);
    const auto& y = res.states.back();
    const double phiX = std::abs(1.0 + gamma * Xr + y[0].real());
    const double dphiX = std::abs(gamma + y[1].real());
    const double err_rep = 10.0 * res.error_estimate * (1.0 + Xr) +
                           (phiX + dphiX) * (v.tail_abs(Xr) + v.tail_abs_moment(Xr)) + 1e-15;
    out.w_at_zero_rep = gamma + y[2].real();
    slope = 1.0 - y[3].real();
    const double disc = std::abs(out.w_at_zero - out.w_at_zero_rep);
    if (disc > 10.0 * (err_w + err_rep))
      fail(ErrorCode::Inconsistent, "zero-energy Wronskian and integral representation disagree by " +
                                        std::to_string(disc));
    out.est_error = err_w + disc;
  }
  const double aw = std::abs(out.w_at_zero);
  out.is_resonant = aw < out.tol_res;
  out.ambiguous = aw >= 0.5 * out.tol_res && aw <= 2.0 * out.tol_res;
  if (out.is_resonant) {
    if (!(std::abs(slope) > 1e-8)) fail(ErrorCode::Inconsistent, "resonant Jost function with vanishing slope");
    out.w0_slope = slope;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Phase tables

namespace {

struct Sample {
  double k = 0.0;
  double log_a = 0.0;
  double arg = 0.0;  // principal value, later replaced by the unwrapped phase
  double err = 0.0;
};

double wrap_near(double arg, double ref) { return arg + kTwoPi * std::round((ref - arg) / kTwoPi); }

class Sampler {
 public:
  Sampler(const Potential& v, double gamma, const PhaseOptions& opt, PhaseTable& table)
      : v_(v), gamma_(gamma), opt_(opt), table_(table) {}

  Sample operator()(double k, bool cross_check) const {
    JostOptions jo = opt_.jost;
    jo.derivative = false;
    jo.cross_check = cross_check;
    // the trace integrands weight the phase by up to k^4
    jo.solve.tolerance = opt_.jost.solve.tolerance / std::max(1.0, k * k);
    const auto e = jost_w(v_, gamma_, SpectralPoint::from_zeta(k), jo);
    table_.audit.merge(e.audit);
    ++table_.evaluations;
    Sample s;
    s.k = k;
    if (std::abs(e.D_minus_one) < 0.5) {
      const cplx l = log1p_complex(e.D_minus_one);
      s.log_a = l.real();
      s.arg = l.imag();
    } else {
      s.log_a = std::log(std::abs(e.w)) - 0.5 * std::log(gamma_ * gamma_ + k * k);
      s.arg = std::arg(e.w / (gamma_ - I * k));
    }
    if (!(std::abs(e.w) > 0.0)) fail(ErrorCode::Inconsistent, "Jost function vanishes on the real axis");
    s.err = e.est_error / std::abs(e.w);
    return s;
  }

 private:
  const Potential& v_;
  double gamma_;
  const PhaseOptions& opt_;
  PhaseTable& table_;
};

// Samples above k_hi until the two-term series fixes the branch; returns them ascending.
// The last entry carries the seeded phase in `arg`.
std::vector<Sample> seed_anchor(const Sampler& sample, const std::vector<double>& ell, double k_hi,
                                const Sample& top, const PhaseOptions& opt) {
  const double l1 = ell.size() > 1 ? ell[1] : 0.0;
  const double l3 = ell.size() > 3 ? ell[3] : 0.0;
  auto series_ok = [&](double K) {
    return std::abs(l3) / std::pow(2.0 * K, 3) <= opt.seed_tolerance && std::abs(l1) / (2.0 * K) <= 0.5;
  };
  std::vector<Sample> extra;
  double K = k_hi;
  Sample cur = top;
  for (int guard = 0;; ++guard) {
    if (series_ok(K)) {
      const double s = asymptotic_eta(K, ell, 2).value;
      if (std::abs(wrap_near(cur.arg, s) - s) <= 0.25) break;
    }
    if (guard > 40) fail(ErrorCode::GridTooCoarse, "the asymptotic series does not fix the phase branch");
    K *= 2.0;
    cur = sample(K, false);
    extra.push_back(cur);
  }
  return extra;
}

// Unwraps args (ascending in k) downward from a seeded top value. Returns the
// index i of the first pair (i, i+1) whose jump reaches max_jump, or npos.
std::size_t unwrap_down(std::vector<double>& eta, const std::vector<double>& arg, double seed, double max_jump) {
  const std::size_t n = arg.size();
  eta.assign(n, 0.0);
  eta[n - 1] = wrap_near(arg[n - 1], seed);
  for (std::size_t i = n - 1; i-- > 0;) {
    eta[i] = wrap_near(arg[i], eta[i + 1]);
    if (std::abs(eta[i] - eta[i + 1]) >= max_jump) return i;
  }
  return static_cast<std::size_t>(-1);
}

// Continuum integrands of the four trace identities in t = ln k.
std::array<double, 4> integrands(double k, double log_a, double eta, const std::vector<double>& ell) {
  auto l = [&](int n) { return n < static_cast<int>(ell.size()) ? ell[n] : 0.0; };
  const double tk = 2.0 * k;
  const double g1 = eta + l(1) / tk;
  return {log_a * k, g1 * k * k, (log_a + l(2) / (tk * tk)) * k * k * k,
          (g1 - l(3) / (tk * tk * tk)) * k * k * k * k};
}

class AdaptiveBuilder {
 public:
  AdaptiveBuilder(const Potential& v, double gamma, std::span<const double> ell, const AdaptivePhaseOptions& opt,
                  PhaseTable& table)
      : opt_(opt), ell_(ell.begin(), ell.end()), table_(table), sample_(v, gamma, opt.phase, table) {}

  void load() {
    for (const auto& p : table_.panels) {
      Pan pan{p.t0, p.t1, {}};
      for (int j = 0; j < 21; ++j) {
        const std::size_t i = p.first + j;
        pan.s[j] = {table_.ks[i], table_.log_a[i], table_.eta_vals[i], table_.est_errors[i]};
      }
      pans_.push_back(pan);
    }
  }

  void add_range(double k0, double k1) {
    const double t0 = std::log(k0), t1 = std::log(k1);
    const int n = std::max(1, static_cast<int>(std::ceil((t1 - t0) / std::log(10.0) * opt_.panels_per_decade)));
    for (int i = 0; i < n; ++i) pans_.push_back(make(t0 + (t1 - t0) * i / n, t0 + (t1 - t0) * (i + 1) / n));
  }

  void run() {
    std::sort(pans_.begin(), pans_.end(), [](const Pan& a, const Pan& b) { return a.t0 < b.t0; });
    const double t_lo = pans_.front().t0, t_hi = pans_.back().t1;
    auto l = [&](int n) { return n < static_cast<int>(ell_.size()) ? std::abs(ell_[n]) : 0.0; };
    const std::array<double, 4> tol = {opt_.integral_tolerance * (1.0 + l(1) / 4),
                                       opt_.integral_tolerance * (1.0 + l(2) / 4),
                                       opt_.integral_tolerance * (1.0 + 3 * l(3) / 16),
                                       opt_.integral_tolerance * (1.0 + l(4) / 8)};
    bool anchored = false;
    std::vector<Sample> above;
    std::vector<double> eta;
    for (int round = 0;; ++round) {
      std::vector<double> arg;
      for (const auto& p : pans_)
        for (const auto& s : p.s) arg.push_back(s.arg);
      if (!anchored) {
        const Sample& top = pans_.back().s[20];
        above = seed_anchor(sample_, ell_, top.k, top, opt_.phase);
        anchored = true;
      }
      const std::size_t n_pan = arg.size();
      for (const auto& s : above) arg.push_back(s.arg);
      const double k_anchor = above.empty() ? pans_.back().s[20].k : above.back().k;
      const double seed = asymptotic_eta(k_anchor, ell_, 2).value;
      const std::size_t bad = unwrap_down(eta, arg, seed, opt_.phase.max_jump);
      if (bad != static_cast<std::size_t>(-1)) {
        if (bad + 1 >= n_pan) {
          // between anchor samples above the table
          const std::size_t at = bad + 1 - n_pan;
          const double k0 = bad < n_pan ? pans_.back().s[20].k : above[bad - n_pan].k;
          const double k1 = above[at].k;
          if (k1 / k0 - 1.0 < std::ldexp(1.0, -opt_.phase.max_refinement_depth))
            fail(ErrorCode::GridTooCoarse, "phase jump not resolved above the table");
          above.insert(above.begin() + at, sample_(std::sqrt(k0 * k1), false));
        } else {
          split_for_jump(bad, bad + 1);
        }
        continue;
      }
      table_.branch_anchor_k = k_anchor;
      for (std::size_t p = 0, i = 0; p < pans_.size(); ++p)
        for (auto& s : pans_[p].s) s.arg = eta[i++];

      // refinement on the identity integrands
      std::vector<std::array<double, 4>> perr(pans_.size());
      std::array<double, 4> total{};
      for (std::size_t p = 0; p < pans_.size(); ++p) {
        const auto& pan = pans_[p];
        std::array<std::array<double, 21>, 4> f{}, noise{};
        for (int j = 0; j < 21; ++j) {
          const auto& s = pan.s[j];
          const auto val = integrands(s.k, s.log_a, s.arg, ell_);
          const auto bump = integrands(s.k, s.log_a + s.err, s.arg + s.err, ell_);
          for (int q = 0; q < 4; ++q) {
            f[q][j] = val[q];
            noise[q][j] = std::abs(bump[q] - val[q]);
          }
        }
        for (int q = 0; q < 4; ++q) {
          const auto [kr, ga] = gk21::combine(f[q], pan.t0, pan.t1);
          const double nz = gk21::combine(noise[q], pan.t0, pan.t1).first;
          // differences at the level of the point errors cannot be refined away
          perr[p][q] = std::abs(kr - ga) > 4.0 * nz ? std::abs(kr - ga) : 0.0;
          total[q] += perr[p][q];
        }
      }
      std::vector<std::size_t> split;
      for (std::size_t p = 0; p < pans_.size(); ++p) {
        const double share = (pans_[p].t1 - pans_[p].t0) / (t_hi - t_lo);
        for (int q = 0; q < 4; ++q)
          if (total[q] > tol[q] && perr[p][q] > 0.5 * tol[q] * share) {
            split.push_back(p);
            break;
          }
      }
      if (split.empty() || static_cast<int>(pans_.size() + split.size()) > opt_.max_panels) break;
      for (auto it = split.rbegin(); it != split.rend(); ++it) split_panel(*it);
    }
    finish();
  }

 private:
  struct Pan {
    double t0, t1;
    std::array<Sample, 21> s;
  };

  Pan make(double t0, double t1) {
    Pan p{t0, t1, {}};
    const auto t = gk21::nodes(t0, t1);
    for (int j = 0; j < 21; ++j) p.s[j] = sample_(std::exp(t[j]), j == 10);
    return p;
  }

  void split_panel(std::size_t p) {
    const double t0 = pans_[p].t0, t1 = pans_[p].t1, tm = 0.5 * (t0 + t1);
    if (t1 - t0 < std::ldexp(1.0, -opt_.phase.max_refinement_depth))
      fail(ErrorCode::GridTooCoarse, "phase panel refinement exhausted");
    Pan left = make(t0, tm), right = make(tm, t1);
    pans_[p] = left;
    pans_.insert(pans_.begin() + p + 1, right);
  }

  void split_for_jump(std::size_t i, std::size_t j) {
    const std::size_t pi = i / 21, pj = j / 21;
    if (pj != pi) split_panel(pj);
    split_panel(pi);
  }

  void finish() {
    table_.ks.clear();
    table_.log_a.clear();
    table_.a_vals.clear();
    table_.eta_vals.clear();
    table_.est_errors.clear();
    table_.panels.clear();
    for (const auto& p : pans_) {
      table_.panels.push_back({p.t0, p.t1, table_.ks.size()});
      for (const auto& s : p.s) {
        table_.ks.push_back(s.k);
        table_.log_a.push_back(s.log_a);
        table_.a_vals.push_back(std::exp(s.log_a));
        table_.eta_vals.push_back(s.arg);
        table_.est_errors.push_back(s.err);
      }
    }
    table_.k_min = std::exp(pans_.front().t0);
    table_.k_top = std::exp(pans_.back().t1);
    // phase at k_min and the extrapolated limit at 0
    const Sample e1 = sample_(table_.k_min, false);
    const Sample e2 = sample_(0.5 * table_.k_min, false);
    const double eta1 = wrap_near(e1.arg, table_.eta_vals.front());
    const double eta2 = wrap_near(e2.arg, eta1);
    table_.eta_zero = 2.0 * eta2 - eta1;
    table_.eta_zero_extrapolated = true;
    table_.eta_at_k_min = eta1;
    table_.log_a_at_k_min = e1.log_a;
  }

  const AdaptivePhaseOptions& opt_;
  std::vector<double> ell_;
  PhaseTable& table_;
  Sampler sample_;
  std::vector<Pan> pans_;
};

void check_ks(std::span<const double> ks) {
  if (ks.empty()) fail(ErrorCode::InvalidArgument, "empty k grid");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(ks[i] > 0.0) || !std::isfinite(ks[i])) fail(ErrorCode::InvalidArgument, "k must be positive and finite");
    if (i > 0 && !(ks[i] > ks[i - 1])) fail(ErrorCode::InvalidArgument, "k grid must be increasing");
  }
}

}  // namespace

PhaseTable phase_table(const Potential& v, double gamma, std::span<const double> ks, const PhaseOptions& opt) {
  check_ks(ks);
  PhaseTable t;
  const auto ell = ell_closed_forms(v, gamma);
  Sampler sample(v, gamma, opt, t);
  struct Node {
    Sample s;
    bool user;
  };
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < ks.size(); ++i) nodes.push_back({sample(ks[i], i % 10 == 0), true});
  for (const auto& s : seed_anchor(sample, ell, ks.back(), nodes.back().s, opt)) nodes.push_back({s, false});
  t.branch_anchor_k = nodes.back().s.k;
  const double seed = asymptotic_eta(t.branch_anchor_k, ell, 2).value;

  std::vector<double> eta;
  for (;;) {
    std::vector<double> arg;
    for (const auto& n : nodes) arg.push_back(n.s.arg);
    const std::size_t bad = unwrap_down(eta, arg, seed, opt.max_jump);
    if (bad == static_cast<std::size_t>(-1)) break;
    const double k0 = nodes[bad].s.k, k1 = nodes[bad + 1].s.k;
    if (k1 / k0 - 1.0 < std::ldexp(1.0, -opt.max_refinement_depth))
      fail(ErrorCode::GridTooCoarse, "phase jump of pi/2 not resolved near k = " + std::to_string(k0));
    nodes.insert(nodes.begin() + bad + 1, {sample(std::sqrt(k0 * k1), false), false});
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].user) continue;
    t.ks.push_back(nodes[i].s.k);
    t.log_a.push_back(nodes[i].s.log_a);
    t.a_vals.push_back(std::exp(nodes[i].s.log_a));
    t.eta_vals.push_back(eta[i]);
    t.est_errors.push_back(nodes[i].s.err);
  }
  const double k1 = t.ks.front();
  const Sample half = sample(0.5 * k1, false);
  const double eta_half = wrap_near(half.arg, t.eta_vals.front());
  t.eta_zero = 2.0 * eta_half - t.eta_vals.front();
  t.eta_zero_extrapolated = true;
  t.k_min = k1;
  t.k_top = t.ks.back();
  t.eta_at_k_min = t.eta_vals.front();
  t.log_a_at_k_min = t.log_a.front();
  return t;
}

PhaseTable adaptive_phase_table(const Potential& v, double gamma, std::span<const double> ell,
                                const AdaptivePhaseOptions& opt) {
  if (!(opt.k_min > 0.0) || !(opt.k_top > opt.k_min)) fail(ErrorCode::InvalidArgument, "need 0 < k_min < k_top");
  PhaseTable t;
  AdaptiveBuilder b(v, gamma, ell, opt, t);
  b.add_range(opt.k_min, opt.k_top);
  b.run();
  return t;
}

void extend_phase_table(PhaseTable& table, const Potential& v, double gamma, std::span<const double> ell,
                        double new_top, const AdaptivePhaseOptions& opt) {
  if (table.panels.empty()) fail(ErrorCode::InvalidArgument, "only adaptive tables can be extended");
  if (!(new_top > table.k_top)) return;
  AdaptiveBuilder b(v, gamma, ell, opt, table);
  b.load();
  b.add_range(table.k_top, new_top);
  b.run();
}

// ---------------------------------------------------------------------------
// Resolvent traces

cplx trace_difference(const Potential& v, double gamma, cplx z, const JostOptions& opt) {
  const auto sp = SpectralPoint::from_energy(z);
  const cplx zeta = sp.zeta;
  if (!(zeta.imag() > 0.0)) fail(ErrorCode::InvalidArgument, "z must lie off [0, inf)");
  JostOptions jo = opt;
  jo.derivative = true;
  const auto e = jost_w(v, gamma, sp, jo);
  if (std::abs(e.w) <= 10.0 * std::max(opt.solve.tolerance, e.est_error))
    fail(ErrorCode::AtEigenvalue, "w(zeta) vanishes: z is an eigenvalue");
  return (e.w_dot / e.w + I / (gamma - I * zeta)) / (2.0 * zeta);
}

cplx resolvent_trace_numeric(const Potential& v, double gamma, cplx z, double X, const SolveOptions& opt) {
  const auto sp = SpectralPoint::from_energy(z);
  const cplx zeta = sp.zeta;
  if (!(zeta.imag() > 0.0)) fail(ErrorCode::InvalidArgument, "z must lie off [0, inf)");
  if (!(X > 0.0) || !std::isfinite(X)) fail(ErrorCode::InvalidArgument, "X must be positive");
  if (v.is_zero()) return 0.0;
  const double tol = opt.tolerance;
  const double az = std::abs(zeta);
  const cplx g = gamma - I * zeta;

  if (az >= opt.small_zeta_cutoff) {
    const double Xb = std::max(X, v.truncation_point(0.1 * tol * std::max(az, 1.0)));
    const auto bs = detail::solve_b_series(v, zeta, Xb, tol, opt.max_iterations);
    const auto ps = detail::solve_p_series(v, gamma, zeta, X, tol, opt.max_iterations);
    const cplx w = g * (1.0 + bs.beta[0]) - bs.dbeta[0];
    auto f = [&](double y) {
      const cplx p0 = detail::free_p(gamma, zeta, y);
      const cplx beta = bs.pg.grid.interpolate(bs.beta, y);
      const cplx delta = ps.pg.grid.interpolate(ps.delta, y);
      return p0 / g - (p0 + delta) * (1.0 + beta) / w;
    };
    auto res = integrate<cplx>(f, 0.0, X, 1e-3 * tol, 0.0, 20000);
    if (!res.converged) fail(ErrorCode::NonConverged, "resolvent kernel quadrature did not converge");
    return res.value;
  }
  // small |zeta|: both solutions from the ODE at the nodes of a fixed panel grid
  const auto pg = detail::potential_grid(v, X, 1.0 / az);
  auto nodes = pg.grid.all_nodes();
  std::vector<double> asc = nodes;
  asc.erase(std::unique(asc.begin(), asc.end()), asc.end());
  std::vector<double> desc(asc.rbegin(), asc.rend());
  const double Xb = std::max(X, detail::jost_x_max(v, zeta, tol));
  const auto b = detail::solve_b_ode(v, zeta, desc, Xb, tol, false);
  const auto p = detail::solve_p_ode(v, gamma, zeta, asc, tol);
  const cplx w = g * (1.0 + b.beta.back()) - b.dbeta.back();
  std::vector<cplx> f(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::size_t a = std::lower_bound(asc.begin(), asc.end(), nodes[i]) - asc.begin();
    const std::size_t d = asc.size() - 1 - a;
    const cplx p0 = detail::free_p(gamma, zeta, nodes[i]);
    f[i] = p0 / g - (p0 + p.delta[a]) * (1.0 + b.beta[d]) / w;
  }
  return pg.grid.integrate(f);
}

}  // namespace halfline
