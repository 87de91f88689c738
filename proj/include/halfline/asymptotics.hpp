#pragma once

#include <span>
#include <vector>

#include "halfline/potential.hpp"

namespace halfline {

// Largest order allowed without the experimental flag.
inline constexpr int kCertifiedOrder = 4;

struct AsymptoticOptions {
  bool experimental = false;  // allow n_max > 4
  double tolerance = 1e-13;
};

// b_0 .. b_{n_max} of the high-energy expansion of e^{-i zeta x} theta.
// Index n of every per-order vector refers to b_n.
struct BSequence {
  int n_max = 0;
  std::vector<double> x_grid;
  std::vector<std::vector<double>> values;  // b_n on x_grid
  std::vector<std::vector<double>> derivs;  // b_n' on x_grid
  std::vector<double> at0, dat0;            // b_n(0), b_n'(0)
  std::vector<double> err0, derr0;          // error estimates of the above
};

BSequence b_sequence(const Potential& v, int n_max, std::span<const double> x_grid,
                     const AsymptoticOptions& opt = {});

// d_0..d_{n_max}; d[0] = 1.
std::vector<double> d_coeffs(const BSequence& b, double gamma);
std::vector<double> d_coeffs(std::span<const double> b0, std::span<const double> db0, double gamma);
// l_1..l_{n_max} from d; the result has ell[0] = 0 so ell[n] = l_n.
std::vector<double> ell_coeffs(std::span<const double> d);
// l_1..l_4 from the moments; ell[0] = 0.
std::vector<double> ell_closed_forms(const Potential& v, double gamma);

struct SeriesValue {
  double value = 0.0;
  double truncation = 0.0;  // first omitted term; +inf when its coefficient is unavailable
};

// eta(k) ~ sum_{n<n_terms} (-1)^{n+1} l_{2n+1} (2k)^{-2n-1}
SeriesValue asymptotic_eta(double k, std::span<const double> ell, int n_terms);
// ln a(k) ~ sum_{1<=n<=n_terms} (-1)^n l_{2n} (2k)^{-2n}
SeriesValue asymptotic_log_a(double k, std::span<const double> ell, int n_terms);

struct CoefficientLedger {
  int n_max = 0;
  double gamma = 0.0;
  BSequence b;
  std::vector<double> d, ell, ell_err;  // indexed by n
  std::vector<double> ell_closed;       // l_1..l_4 from the moments
  double max_discrepancy = 0.0;         // between recurrence and closed forms through order 4
};

CoefficientLedger coefficient_ledger(const Potential& v, double gamma, int n_max,
                                     const AsymptoticOptions& opt = {});

}  // namespace halfline
