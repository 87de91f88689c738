#include "halfline/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace halfline {

namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

void dump(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? fmt("%.17g", x + 0.0) : "null";
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += pad + Json(it.key()).dump() + (indent > 0 ? ": " : ":");
        dump(it.value(), indent, depth + 1, out);
      }
      out += close + '}';
      break;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        out += pad;
        dump(e, indent, depth + 1, out);
      }
      out += close + ']';
      break;
    }
    default:
      out += j.dump();
  }
}

Json sample_row(const WaveSample& s) {
  return Json{{"kind", s.kind == WaveKind::Regular ? "phi" : "theta"},
              {"x", s.x},
              {"re_value", s.value.real()},
              {"im_value", s.value.imag()},
              {"re_derivative", s.derivative.real()},
              {"im_derivative", s.derivative.imag()},
              {"est_error", s.est_error}};
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump(j, indent, 0, out);
  return out;
}

std::string csv_number(double x) { return std::isfinite(x) ? fmt("%.12g", x + 0.0) : "nan"; }

Json to_json(const TraceReport& r) {
  return Json{{"potential_spec", r.potential_spec},
              {"gamma", r.gamma},
              {"order", r.order},
              {"lhs_discrete", r.lhs_discrete},
              {"lhs_continuum", r.lhs_continuum},
              {"rhs", r.rhs},
              {"residual", r.residual},
              {"budget",
               {{"quadrature", r.budget.quadrature},
                {"tail", r.budget.tail},
                {"eigenvalue", r.budget.eigenvalue},
                {"phase", r.budget.phase}}},
              {"pass", r.pass}};
}

Json to_json(const JostEvaluation& e) {
  return Json{{"re_zeta", e.zeta.zeta.real()}, {"im_zeta", e.zeta.zeta.imag()}, {"re_w", e.w.real()},
              {"im_w", e.w.imag()},           {"re_D", e.D.real()},             {"im_D", e.D.imag()},
              {"est_error", e.est_error}};
}

Json to_json(const LevinsonReport& r) {
  return Json{{"case", r.case_label},   {"resonant", r.resonant}, {"w_at_zero", r.w_at_zero},
              {"eta_zero", r.eta_zero}, {"shift", r.shift},       {"shift_over_pi", r.shift / std::numbers::pi},
              {"count", r.count},       {"distance", r.distance}};
}

Json to_json(const LevinsonCheck& c) {
  Json j = to_json(c.report);
  j["eigen_count"] = c.eigen_count;
  j["expected_shift"] = c.expected_shift;
  j["deviation_over_pi"] = c.deviation;
  j["pass"] = c.pass;
  return j;
}

Json to_json(const ResonanceReport& r) {
  Json j{{"w_at_zero", r.w_at_zero}, {"w_at_zero_rep", r.w_at_zero_rep}, {"est_error", r.est_error},
         {"tol_res", r.tol_res},     {"resonant", r.is_resonant},        {"ambiguous", r.ambiguous}};
  j["w0_slope"] = r.w0_slope ? Json(*r.w0_slope) : Json(nullptr);
  return j;
}

Json to_json(const BoundAudit& a) {
  return Json{{"checked", a.checked}, {"violated", a.violated}, {"worst_ratio", a.worst_ratio}};
}

Json eigenvalues_json(const std::string& spec, double gamma, const EigenvalueSet& e, const FdResult* oracle) {
  Json list = Json::array();
  for (int j = 0; j < e.count; ++j) {
    Json row{{"lambda", e.lambdas[j]}, {"kappa", e.kappas[j]}, {"residual", e.residuals[j]}, {"error", e.errors[j]}};
    if (oracle && j < static_cast<int>(oracle->eigenvalues.size())) {
      row["oracle_lambda"] = oracle->eigenvalues[j];
      row["oracle_error"] = oracle->errors[j];
      row["oracle_delta"] = e.lambdas[j] - oracle->eigenvalues[j];
      row["oracle_relative_delta"] = std::abs(e.lambdas[j] - oracle->eigenvalues[j]) / std::abs(oracle->eigenvalues[j]);
    }
    list.push_back(row);
  }
  Json j{{"potential_spec", spec}, {"gamma", gamma}, {"count", e.count}, {"eigenvalues", list}};
  j["h0_eigenvalue"] = e.h0_eigenvalue ? Json(*e.h0_eigenvalue) : Json(nullptr);
  j["kappa_max"] = e.kappa_max;
  j["near_kappa_max"] = e.near_kappa_max;
  if (oracle) j["oracle_count"] = oracle->eigenvalues.size();
  j["audit"] = to_json(e.audit);
  return j;
}

Json coefficients_json(const CoefficientLedger& led) {
  Json rows = Json::array();
  for (int n = 1; n <= led.n_max; ++n) {
    Json r{{"n", n}, {"d", led.d[n]}, {"ell", led.ell[n]}, {"ell_error", led.ell_err[n]}};
    if (n < static_cast<int>(led.ell_closed.size())) {
      r["ell_closed"] = led.ell_closed[n];
      r["discrepancy"] = std::abs(led.ell[n] - led.ell_closed[n]);
    }
    rows.push_back(r);
  }
  return Json{{"gamma", led.gamma}, {"n_max", led.n_max}, {"coefficients", rows}, {"max_discrepancy", led.max_discrepancy}};
}

Json samples_json(const std::vector<WaveSample>& phi, const std::vector<WaveSample>& theta) {
  Json rows = Json::array();
  for (const auto& s : phi) rows.push_back(sample_row(s));
  for (const auto& s : theta) rows.push_back(sample_row(s));
  return rows;
}

void write_phase_csv(std::ostream& os, const PhaseTable& t) {
  os << "k,a,eta,est_error\n";
  for (std::size_t i = 0; i < t.ks.size(); ++i)
    os << csv_number(t.ks[i]) << ',' << csv_number(t.a_vals[i]) << ',' << csv_number(t.eta_vals[i]) << ','
       << csv_number(t.est_errors[i]) << '\n';
}

void write_samples_csv(std::ostream& os, const std::vector<WaveSample>& phi, const std::vector<WaveSample>& theta) {
  os << "kind,x,re_value,im_value,re_derivative,im_derivative,est_error\n";
  auto row = [&](const WaveSample& s) {
    os << (s.kind == WaveKind::Regular ? "phi" : "theta") << ',' << csv_number(s.x) << ','
       << csv_number(s.value.real()) << ',' << csv_number(s.value.imag()) << ',' << csv_number(s.derivative.real())
       << ',' << csv_number(s.derivative.imag()) << ',' << csv_number(s.est_error) << '\n';
  };
  for (const auto& s : phi) row(s);
  for (const auto& s : theta) row(s);
}

void write_trace_csv(std::ostream& os, const std::vector<TraceReport>& reports) {
  os << "potential_spec,gamma,order,lhs_discrete,lhs_continuum,rhs,residual,budget_quadrature,budget_tail,"
        "budget_eigenvalue,budget_phase,pass\n";
  for (const auto& r : reports)
    os << r.potential_spec << ',' << csv_number(r.gamma) << ',' << csv_number(r.order) << ','
       << csv_number(r.lhs_discrete) << ',' << csv_number(r.lhs_continuum) << ',' << csv_number(r.rhs) << ','
       << csv_number(r.residual) << ',' << csv_number(r.budget.quadrature) << ',' << csv_number(r.budget.tail) << ','
       << csv_number(r.budget.eigenvalue) << ',' << csv_number(r.budget.phase) << ',' << (r.pass ? "PASS" : "FAIL")
       << '\n';
}

void write_coefficients_csv(std::ostream& os, const CoefficientLedger& led) {
  os << "n,d,ell,ell_error,ell_closed,discrepancy\n";
  for (int n = 1; n <= led.n_max; ++n) {
    const bool closed = n < static_cast<int>(led.ell_closed.size());
    os << n << ',' << csv_number(led.d[n]) << ',' << csv_number(led.ell[n]) << ',' << csv_number(led.ell_err[n]) << ','
       << (closed ? csv_number(led.ell_closed[n]) : "") << ','
       << (closed ? csv_number(std::abs(led.ell[n] - led.ell_closed[n])) : "") << '\n';
  }
}

void write_eigenvalues_csv(std::ostream& os, const EigenvalueSet& e, const FdResult* oracle) {
  os << "j,lambda,kappa,residual,error,oracle_lambda,oracle_delta\n";
  for (int j = 0; j < e.count; ++j) {
    const bool has = oracle && j < static_cast<int>(oracle->eigenvalues.size());
    os << j << ',' << csv_number(e.lambdas[j]) << ',' << csv_number(e.kappas[j]) << ',' << csv_number(e.residuals[j])
       << ',' << csv_number(e.errors[j]) << ',' << (has ? csv_number(oracle->eigenvalues[j]) : "") << ','
       << (has ? csv_number(e.lambdas[j] - oracle->eigenvalues[j]) : "") << '\n';
  }
}

}  // namespace halfline
