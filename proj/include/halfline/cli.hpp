#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace halfline {

enum ExitCode : int { kExitPass = 0, kExitConfig = 2, kExitNumeric = 3, kExitFail = 4 };

// Flat run configuration. Sources in increasing precedence: defaults, --config file,
// HALFLINE_* environment variables, command-line flags.
struct RunConfig {
  std::string potential_spec;
  double gamma = 0.0;
  struct {
    std::optional<double> solution;  // 1e-10 for `solve`, pipeline defaults elsewhere
    double quadrature = 1e-11;
    std::optional<double> resonance;
    double phase_jump = 1.5707963267948966;
  } tolerances;
  double tolerance_scale = 1.0;
  struct {
    double k_min = 1e-4;
    double k_top = 64.0;
    int points_per_decade = 20;
    std::optional<double> kappa_max;
  } grids;
  std::string format;  // json | csv; empty picks the subcommand default
  std::string output_path;
  bool diagnostics = false;
  bool experimental = false;
  int n_max = 4;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts a+bi, a-bi, bi, i, a. Throws ConfigError naming `flag`.
std::complex<double> parse_complex(const std::string& text, const std::string& flag);
std::vector<double> parse_real_list(const std::string& text, const std::string& flag);

// key=value lines; '#' starts a comment. Keys are the long flag names.
std::map<std::string, std::string> read_config_file(const std::string& path);
std::map<std::string, std::string> read_environment();
// Applies raw values over cfg; throws ConfigError naming the offending key.
void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& values);
void validate(const RunConfig& cfg);

// Full front end; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace halfline
