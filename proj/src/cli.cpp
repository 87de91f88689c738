#include "halfline/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "halfline/errors.hpp"
#include "halfline/report_io.hpp"
#include "halfline/trace_identities.hpp"

namespace halfline {

namespace {

// Keys shared by the flag names, the config file and the environment.
const std::vector<std::string> kKeys = {"potential",       "gamma",          "tol-solution", "tol-quadrature",
                                        "tol-resonance",   "tol-phase-jump", "tolerance-scale", "k-min",
                                        "k-top",           "points-per-decade", "kappa-max",  "format",
                                        "output",          "diagnostics",    "experimental", "n-max"};

std::string trim(std::string s) {
  auto sp = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), sp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), sp).base(), s.end());
  return s;
}

std::string normalize_key(std::string k) {
  k = trim(k);
  while (!k.empty() && k.front() == '-') k.erase(k.begin());
  for (auto& c : k) c = c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return k;
}

std::string env_name(const std::string& key) {
  std::string e = "HALFLINE_";
  for (char c : key) e += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return e;
}

bool parse_double(std::string_view s, double& out) {
  const auto* b = s.data();
  const auto* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e && b != e;
}

double real_value(const std::string& text, const std::string& flag) {
  double x;
  if (!parse_double(trim(text), x) || !std::isfinite(x))
    throw ConfigError(flag + ": cannot parse '" + text + "' as a finite real");
  return x;
}

bool bool_value(const std::string& text, const std::string& flag) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError(flag + ": expected a boolean, got '" + text + "'");
}

struct Emitter {
  std::ostringstream body;
  std::string format;
  bool json() const { return format == "json"; }
};

void emit(const RunConfig& cfg, const std::string& body, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << body;
    return;
  }
  std::ofstream f(cfg.output_path, std::ios::binary);
  if (!f) throw ConfigError("--output: cannot open '" + cfg.output_path + "' for writing");
  f << body;
}

double scaled(double tol, double scale) { return std::max(1e-15, tol * scale); }

TraceOptions trace_options(const RunConfig& cfg) {
  TraceOptions o;
  o.tolerance_scale = cfg.tolerance_scale;
  o.phase.k_min = cfg.grids.k_min;
  o.phase.k_top = cfg.grids.k_top;
  o.phase.integral_tolerance = cfg.tolerances.quadrature;
  o.phase.phase.max_jump = cfg.tolerances.phase_jump;
  if (cfg.tolerances.solution) {
    o.phase.phase.jost.solve.tolerance = *cfg.tolerances.solution;
    o.eigen.tolerance = *cfg.tolerances.solution;
  }
  o.eigen.kappa_max = cfg.grids.kappa_max;
  o.resonance.tol_res = cfg.tolerances.resonance;
  o.experimental = cfg.experimental;
  return o;
}

std::string pick_format(const RunConfig& cfg, const char* fallback) {
  return cfg.format.empty() ? fallback : cfg.format;
}

// ---------------------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, const std::string& zeta_text, const std::string& x_text, std::ostream& out,
              std::ostream& err) {
  if (zeta_text.empty()) throw ConfigError("--zeta: required");
  if (x_text.empty()) throw ConfigError("--x: required");
  const cplx zeta = parse_complex(zeta_text, "--zeta");
  if (zeta.imag() < 0.0) throw ConfigError("--zeta: imaginary part must be >= 0");
  auto xs = parse_real_list(x_text, "--x");
  for (double x : xs)
    if (x < 0.0) throw ConfigError("--x: points must be >= 0");
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  const Potential v = parse_potential(cfg.potential_spec);
  SolveOptions so;
  so.tolerance = scaled(cfg.tolerances.solution.value_or(1e-10), cfg.tolerance_scale);
  so.probe_residuals = cfg.diagnostics;
  const auto sp = SpectralPoint::from_zeta(zeta);
  const auto phi = zeta == 0.0 ? regular_direct(v, cfg.gamma, sp, xs, so) : regular_volterra(v, cfg.gamma, sp, xs, so);
  const auto theta = std::abs(zeta) >= so.small_zeta_cutoff ? jost_b_iteration(v, sp, xs, so)
                                                            : jost_backward(v, sp, xs, so);
  if (cfg.diagnostics) {
    for (const auto* s : {&phi, &theta}) {
      err << "# " << to_string(s->report.method) << ": iterations " << s->report.iterations << ", bound checks "
          << s->report.audit.checked << ", violated " << s->report.audit.violated << '\n';
      for (const auto& r : s->report.residuals)
        err << "#   probe x=" << csv_number(r.x) << " residual=" << csv_number(r.residual) << '\n';
    }
  }
  std::ostringstream body;
  if (pick_format(cfg, "csv") == "json") {
    Json j{{"potential_spec", v.spec()}, {"gamma", cfg.gamma}, {"re_zeta", zeta.real()}, {"im_zeta", zeta.imag()}};
    j["samples"] = samples_json(phi.samples, theta.samples);
    if (zeta != 0.0) {
      JostOptions jo;
      jo.solve.tolerance = so.tolerance;
      j["jost"] = to_json(jost_w(v, cfg.gamma, sp, jo));
    }
    body << dump_json(j) << '\n';
  } else {
    write_samples_csv(body, phi.samples, theta.samples);
  }
  emit(cfg, body.str(), out);
  return kExitPass;
}

int cmd_phase(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Potential v = parse_potential(cfg.potential_spec);
  const double decades = std::log10(cfg.grids.k_top / cfg.grids.k_min);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * cfg.grids.points_per_decade)) + 1);
  std::vector<double> ks(n);
  for (int i = 0; i < n; ++i) ks[i] = cfg.grids.k_min * std::pow(cfg.grids.k_top / cfg.grids.k_min, double(i) / (n - 1));
  ks.back() = cfg.grids.k_top;
  PhaseOptions po;
  po.max_jump = cfg.tolerances.phase_jump;
  if (cfg.tolerances.solution) po.jost.solve.tolerance = *cfg.tolerances.solution;
  po.jost.solve.tolerance = scaled(po.jost.solve.tolerance, cfg.tolerance_scale);
  const auto t = phase_table(v, cfg.gamma, ks, po);
  if (cfg.diagnostics)
    err << "# evaluations " << t.evaluations << ", branch anchor k=" << csv_number(t.branch_anchor_k) << ", eta(0)="
        << csv_number(t.eta_zero) << ", bound checks " << t.audit.checked << ", violated " << t.audit.violated << '\n';
  std::ostringstream body;
  if (pick_format(cfg, "csv") == "json") {
    Json j{{"potential_spec", v.spec()}, {"gamma", cfg.gamma}, {"k", t.ks}, {"a", t.a_vals}, {"eta", t.eta_vals},
           {"est_error", t.est_errors}, {"eta_zero", t.eta_zero}, {"branch_anchor_k", t.branch_anchor_k}};
    body << dump_json(j) << '\n';
  } else {
    write_phase_csv(body, t);
  }
  emit(cfg, body.str(), out);
  return kExitPass;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Potential v = parse_potential(cfg.potential_spec);
  TraceContext ctx(v, cfg.gamma, trace_options(cfg));
  const auto& eig = ctx.eigenvalues();
  const auto fd = fd_oracle(v, cfg.gamma);
  const auto lev = ctx.levinson();
  bool pass = lev.pass && fd.eigenvalues.size() == static_cast<std::size_t>(eig.count);
  for (int j = 0; j < eig.count && j < static_cast<int>(fd.eigenvalues.size()); ++j)
    pass = pass && std::abs(eig.lambdas[j] - fd.eigenvalues[j]) <= 1e-6 * std::abs(fd.eigenvalues[j]);
  if (cfg.diagnostics)
    err << "# scan points " << eig.scan_points << ", refinements " << eig.refinements << ", kappa_max "
        << csv_number(eig.kappa_max) << '\n';
  std::ostringstream body;
  if (pick_format(cfg, "json") == "json") {
    Json j = eigenvalues_json(v.spec(), cfg.gamma, eig, &fd);
    j["levinson"] = to_json(lev);
    j["pass"] = pass;
    body << dump_json(j) << '\n';
  } else {
    write_eigenvalues_csv(body, eig, &fd);
  }
  emit(cfg, body.str(), out);
  return pass ? kExitPass : kExitFail;
}

int cmd_coeffs(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Potential v = parse_potential(cfg.potential_spec);
  AsymptoticOptions ao;
  ao.experimental = cfg.experimental;
  ao.tolerance = scaled(ao.tolerance, cfg.tolerance_scale);
  const auto led = coefficient_ledger(v, cfg.gamma, cfg.n_max, ao);
  const bool pass = led.max_discrepancy <= 1e-9;
  std::ostringstream body;
  if (pick_format(cfg, "json") == "json") {
    Json j{{"potential_spec", v.spec()}};
    j.update(coefficients_json(led));
    j["pass"] = pass;
    body << dump_json(j) << '\n';
  } else {
    write_coefficients_csv(body, led);
  }
  emit(cfg, body.str(), out);
  return pass ? kExitPass : kExitFail;
}

int cmd_trace(const RunConfig& cfg, const std::string& orders_text, bool matrix, std::ostream& out,
              std::ostream& err) {
  const auto orders = parse_real_list(orders_text.empty() ? "0.5,1,1.5,2" : orders_text, "--orders");
  for (double s : orders) {
    if (!(s > 0.0) || std::abs(2.0 * s - std::round(2.0 * s)) > 1e-12)
      throw ConfigError("--orders: each order must be a positive multiple of 1/2");
    if (s > 2.0 && !cfg.experimental) throw ConfigError("--orders: orders above 2 need --experimental");
  }
  const auto opt = trace_options(cfg);
  std::vector<TraceReport> reports;
  bool pass = true;
  if (matrix) {
    for (const auto& cell : run_matrix(acceptance_matrix(), orders, opt)) {
      if (!cell.error.empty()) {
        err << "error: " << cell.cell.potential_spec << " gamma=" << csv_number(cell.cell.gamma) << ": " << cell.error
            << '\n';
        pass = false;
        continue;
      }
      reports.insert(reports.end(), cell.reports.begin(), cell.reports.end());
      if (cfg.diagnostics)
        err << "# " << cell.cell.potential_spec << " gamma=" << csv_number(cell.cell.gamma) << ": bound checks "
            << cell.audit.checked << ", violated " << cell.audit.violated << '\n';
    }
  } else {
    TraceContext ctx(parse_potential(cfg.potential_spec), cfg.gamma, opt);
    for (double s : orders) reports.push_back(ctx.verify(s));
    if (cfg.diagnostics) {
      const auto a = ctx.audit();
      err << "# k_top " << csv_number(ctx.phase().k_top) << ", panels " << ctx.phase().panels.size()
          << ", evaluations " << ctx.phase().evaluations << ", bound checks " << a.checked << ", violated "
          << a.violated << '\n';
    }
  }
  for (const auto& r : reports) pass = pass && r.pass;
  std::ostringstream body;
  if (pick_format(cfg, "json") == "json") {
    for (const auto& r : reports) body << dump_json(to_json(r), -1) << '\n';
  } else {
    write_trace_csv(body, reports);
  }
  emit(cfg, body.str(), out);
  return pass ? kExitPass : kExitFail;
}

int cmd_levinson(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Potential v = parse_potential(cfg.potential_spec);
  const auto c = verify_levinson(v, cfg.gamma, trace_options(cfg));
  std::ostringstream body;
  if (pick_format(cfg, "json") == "json") {
    Json j{{"potential_spec", v.spec()}, {"gamma", cfg.gamma}};
    j.update(to_json(c));
    body << dump_json(j) << '\n';
  } else {
    body << "potential_spec,gamma,case,resonant,shift_over_pi,count,eigen_count,deviation_over_pi,pass\n"
         << v.spec() << ',' << csv_number(cfg.gamma) << ',' << c.report.case_label << ','
         << (c.report.resonant ? "true" : "false") << ',' << csv_number(c.report.shift / std::numbers::pi) << ',' << c.report.count
         << ',' << c.eigen_count << ',' << csv_number(c.deviation) << ',' << (c.pass ? "PASS" : "FAIL") << '\n';
  }
  emit(cfg, body.str(), out);
  return c.pass ? kExitPass : kExitFail;
}

const char* kFooter = R"(Settings precedence: flags > HALFLINE_* environment > --config file > defaults.
Environment names are the long flag names upper-cased with '-' -> '_', e.g. HALFLINE_GAMMA,
HALFLINE_TOL_QUADRATURE. The config file holds key=value lines with the same keys (potential=exp:1,1).
Potentials: exp:c,mu | gauss:c,sigma | bump:c,a | sum:<spec>+<spec> | scale:<f>*<spec>.
Exit codes: 0 pass, 2 invalid configuration, 3 numerical failure, 4 check failed (report still written).)";

}  // namespace

std::complex<double> parse_complex(const std::string& text, const std::string& flag) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto bad = [&]() -> ConfigError { return ConfigError(flag + ": cannot parse '" + text + "' as a complex number"); };
  if (s.empty()) throw bad();
  double re = 0.0, im = 0.0;
  if (s.back() == 'i' || s.back() == 'j') {
    s.pop_back();
    // split at the last sign that is not an exponent sign
    std::size_t cut = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;)
      if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
        cut = i;
        break;
      }
    std::string re_part = cut == std::string::npos ? "" : s.substr(0, cut);
    std::string im_part = cut == std::string::npos ? s : s.substr(cut);
    if (im_part.empty() || im_part == "+") im_part = "1";
    else if (im_part == "-") im_part = "-1";
    if (!re_part.empty() && !parse_double(re_part, re)) throw bad();
    if (!parse_double(im_part, im)) throw bad();
  } else if (!parse_double(s, re)) {
    throw bad();
  }
  if (!std::isfinite(re) || !std::isfinite(im)) throw bad();
  return {re, im};
}

std::vector<double> parse_real_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(real_value(item, flag));
  if (out.empty()) throw ConfigError(flag + ": empty list");
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("--config: cannot read '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int no = 0;
  while (std::getline(f, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("--config: line " + std::to_string(no) + " is not key=value");
    const std::string key = normalize_key(line.substr(0, eq));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw ConfigError("--config: unknown key '" + key + "' on line " + std::to_string(no));
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_environment() {
  std::map<std::string, std::string> out;
  for (const auto& k : kKeys)
    if (const char* v = std::getenv(env_name(k).c_str())) out[k] = v;
  return out;
}

void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& values) {
  for (const auto& [key, val] : values) {
    const std::string flag = "--" + key;
    if (key == "potential") cfg.potential_spec = val;
    else if (key == "gamma") cfg.gamma = real_value(val, flag);
    else if (key == "tol-solution") cfg.tolerances.solution = real_value(val, flag);
    else if (key == "tol-quadrature") cfg.tolerances.quadrature = real_value(val, flag);
    else if (key == "tol-resonance") cfg.tolerances.resonance = real_value(val, flag);
    else if (key == "tol-phase-jump") cfg.tolerances.phase_jump = real_value(val, flag);
    else if (key == "tolerance-scale") cfg.tolerance_scale = real_value(val, flag);
    else if (key == "k-min") cfg.grids.k_min = real_value(val, flag);
    else if (key == "k-top") cfg.grids.k_top = real_value(val, flag);
    else if (key == "kappa-max") cfg.grids.kappa_max = real_value(val, flag);
    else if (key == "points-per-decade" || key == "n-max") {
      const double x = real_value(val, flag);
      if (x != std::floor(x) || std::abs(x) > 1e6) throw ConfigError(flag + ": expected an integer");
      (key == "n-max" ? cfg.n_max : cfg.grids.points_per_decade) = static_cast<int>(x);
    } else if (key == "format") cfg.format = trim(val);
    else if (key == "output") cfg.output_path = trim(val);
    else if (key == "diagnostics") cfg.diagnostics = bool_value(val, flag);
    else if (key == "experimental") cfg.experimental = bool_value(val, flag);
    else throw ConfigError("unknown setting '" + key + "'");
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.potential_spec.empty()) throw ConfigError("--potential: required");
  try {
    (void)parse_potential(cfg.potential_spec);
  } catch (const SolverError& e) {
    throw ConfigError(std::string("--potential: ") + e.what());
  }
  auto positive = [](double x, const char* flag) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(std::string(flag) + ": must be positive");
  };
  if (cfg.tolerances.solution) positive(*cfg.tolerances.solution, "--tol-solution");
  positive(cfg.tolerances.quadrature, "--tol-quadrature");
  if (cfg.tolerances.resonance) positive(*cfg.tolerances.resonance, "--tol-resonance");
  positive(cfg.tolerances.phase_jump, "--tol-phase-jump");
  if (cfg.tolerances.phase_jump >= std::numbers::pi) throw ConfigError("--tol-phase-jump: must be below pi");
  positive(cfg.tolerance_scale, "--tolerance-scale");
  positive(cfg.grids.k_min, "--k-min");
  positive(cfg.grids.k_top, "--k-top");
  if (!(cfg.grids.k_min < cfg.grids.k_top)) throw ConfigError("--k-min: must be below --k-top");
  if (cfg.grids.points_per_decade < 1) throw ConfigError("--points-per-decade: must be at least 1");
  if (cfg.grids.kappa_max) positive(*cfg.grids.kappa_max, "--kappa-max");
  if (!cfg.format.empty() && cfg.format != "json" && cfg.format != "csv")
    throw ConfigError("--format: expected json or csv");
  if (cfg.n_max < 1) throw ConfigError("--n-max: must be at least 1");
  if (cfg.n_max > kCertifiedOrder && !cfg.experimental)
    throw ConfigError("--n-max: orders above " + std::to_string(kCertifiedOrder) + " need --experimental");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scattering data, spectra and trace identities for half-line Schroedinger operators with a "
               "Robin boundary condition."};
  app.name("halfline");
  app.footer(kFooter);
  app.require_subcommand(1);

  std::map<std::string, std::string> flag_vals;
  std::map<std::string, bool> flag_bools;
  std::string config_path, zeta_text, x_text, orders_text;
  bool matrix = false;

  auto common = [&](CLI::App* sub) {
    auto opt = [&](const std::string& key, const std::string& help) {
      sub->add_option("--" + key, flag_vals[key], help);
    };
    opt("potential", "potential spec, e.g. exp:1,1 or scale:-3*exp:1,2");
    opt("gamma", "Robin parameter in u'(0) = gamma u(0)");
    opt("tol-solution", "solution tolerance (solve: 1e-10; pipeline default 1e-13)");
    opt("tol-quadrature", "continuum integral tolerance (1e-11)");
    opt("tol-resonance", "threshold on |w(0)| (default 1e-8 (1 + |gamma|))");
    opt("tol-phase-jump", "largest allowed phase step between samples (pi/2)");
    opt("tolerance-scale", "multiplies every tolerance (1)");
    opt("k-min", "lower end of the k grid (1e-4)");
    opt("k-top", "upper end of the k grid (64)");
    opt("points-per-decade", "k points per decade for `phase` (20)");
    opt("kappa-max", "upper end of the eigenvalue scan in kappa");
    opt("format", "json or csv");
    opt("output", "write to this file instead of stdout");
    opt("n-max", "highest coefficient order for `coeffs` (4)");
    sub->add_option("--config", config_path, "key=value settings file");
    sub->add_flag("--diagnostics", flag_bools["diagnostics"], "solver diagnostics on stderr");
    sub->add_flag("--experimental", flag_bools["experimental"], "allow orders beyond the certified range");
  };

  auto* solve = app.add_subcommand("solve", "regular and Jost solutions at one zeta on an x list");
  common(solve);
  solve->add_option("--zeta", zeta_text, "spectral parameter, e.g. 1+0i or 2i");
  solve->add_option("--x", x_text, "comma-separated x values");
  auto* phase = app.add_subcommand("phase", "modulus a(k) and phase eta(k) of the Jost function");
  common(phase);
  auto* spectrum = app.add_subcommand("spectrum", "negative eigenvalues with the finite-difference oracle");
  common(spectrum);
  auto* coeffs = app.add_subcommand("coeffs", "asymptotic coefficients d_n and l_n");
  common(coeffs);
  auto* trace = app.add_subcommand("trace-check", "verify the trace identities");
  common(trace);
  trace->add_option("--orders", orders_text, "comma-separated orders (0.5,1,1.5,2)");
  trace->add_flag("--matrix", matrix, "run the full acceptance grid instead of --potential");
  auto* lev = app.add_subcommand("levinson", "Levinson theorem check");
  common(lev);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    RunConfig cfg;
    if (config_path.empty())
      if (const char* c = std::getenv("HALFLINE_CONFIG")) config_path = c;
    if (!config_path.empty()) apply_settings(cfg, read_config_file(config_path));
    apply_settings(cfg, read_environment());
    std::map<std::string, std::string> given;
    for (const auto& [k, v] : flag_vals)
      if (sub->count("--" + k) > 0) given[k] = v;
    for (const auto& [k, v] : flag_bools)
      if (v) given[k] = "true";
    apply_settings(cfg, given);
    if (matrix && cfg.potential_spec.empty()) cfg.potential_spec = "exp:0,1";  // unused by the grid
    validate(cfg);

    if (sub == solve) return cmd_solve(cfg, zeta_text, x_text, out, err);
    if (sub == phase) return cmd_phase(cfg, out, err);
    if (sub == spectrum) return cmd_spectrum(cfg, out, err);
    if (sub == coeffs) return cmd_coeffs(cfg, out, err);
    if (sub == trace) return cmd_trace(cfg, orders_text, matrix, out, err);
    return cmd_levinson(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    const bool config = e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::OrderTooHigh;
    return config ? kExitConfig : kExitNumeric;
  }
}

}  // namespace halfline
