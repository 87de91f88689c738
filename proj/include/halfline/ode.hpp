#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "halfline/errors.hpp"

namespace halfline {

template <std::size_t N>
using CState = std::array<std::complex<double>, N>;

struct OdeOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  double h_init = 0.0;  // 0: automatic
  long max_steps = 2'000'000;
};

template <std::size_t N>
struct OdeResult {
  std::vector<CState<N>> states;  // one per target
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
  double error_estimate = 0.0;  // sum of local error estimates in absolute units
};

namespace dop853 {
// Dormand-Prince 8(5,3) tableau.
inline constexpr double c2 = 0.526001519587677318785587544488e-01;
inline constexpr double c3 = 0.789002279381515978178381316732e-01;
inline constexpr double c4 = 0.118350341907227396726757197510e+00;
inline constexpr double c5 = 0.281649658092772603273242802490e+00;
inline constexpr double c6 = 0.333333333333333333333333333333e+00;
inline constexpr double c7 = 0.25e+00;
inline constexpr double c8 = 0.307692307692307692307692307692e+00;
inline constexpr double c9 = 0.651282051282051282051282051282e+00;
inline constexpr double c10 = 0.6e+00;
inline constexpr double c11 = 0.857142857142857142857142857142e+00;

inline constexpr double a21 = 5.26001519587677318785587544488e-2;
inline constexpr double a31 = 1.97250569845378994544595329183e-2;
inline constexpr double a32 = 5.91751709536136983633785987549e-2;
inline constexpr double a41 = 2.95875854768068491816892993775e-2;
inline constexpr double a43 = 8.87627564304205475450678981324e-2;
inline constexpr double a51 = 2.41365134159266685502369798665e-1;
inline constexpr double a53 = -8.84549479328286085344864962717e-1;
inline constexpr double a54 = 9.24834003261792003115737966543e-1;
inline constexpr double a61 = 3.7037037037037037037037037037e-2;
inline constexpr double a64 = 1.70828608729473871279604482173e-1;
inline constexpr double a65 = 1.25467687566822425016691814123e-1;
inline constexpr double a71 = 3.7109375e-2;
inline constexpr double a74 = 1.70252211019544039314978060272e-1;
inline constexpr double a75 = 6.02165389804559606850219397283e-2;
inline constexpr double a76 = -1.7578125e-2;
inline constexpr double a81 = 3.70920001185047927108779319836e-2;
inline constexpr double a84 = 1.70383925712239993810214054705e-1;
inline constexpr double a85 = 1.07262030446373284651809199168e-1;
inline constexpr double a86 = -1.53194377486244017527936158236e-2;
inline constexpr double a87 = 8.27378916381402288758473766002e-3;
inline constexpr double a91 = 6.24110958716075717114429577812e-1;
inline constexpr double a94 = -3.36089262944694129406857109825e0;
inline constexpr double a95 = -8.68219346841726006818189891453e-1;
inline constexpr double a96 = 2.75920996994467083049415600797e1;
inline constexpr double a97 = 2.01540675504778934086186788979e1;
inline constexpr double a98 = -4.34898841810699588477366255144e1;
inline constexpr double a101 = 4.77662536438264365890433908527e-1;
inline constexpr double a104 = -2.48811461997166764192642586468e0;
inline constexpr double a105 = -5.90290826836842996371446475743e-1;
inline constexpr double a106 = 2.12300514481811942347288949897e1;
inline constexpr double a107 = 1.52792336328824235832596922938e1;
inline constexpr double a108 = -3.32882109689848629194453265587e1;
inline constexpr double a109 = -2.03312017085086261358222928593e-2;
inline constexpr double a111 = -9.3714243008598732571704021658e-1;
inline constexpr double a114 = 5.18637242884406370830023853209e0;
inline constexpr double a115 = 1.09143734899672957818500254654e0;
inline constexpr double a116 = -8.14978701074692612513997267357e0;
inline constexpr double a117 = -1.85200656599969598641566180701e1;
inline constexpr double a118 = 2.27394870993505042818970056734e1;
inline constexpr double a119 = 2.49360555267965238987089396762e0;
inline constexpr double a1110 = -3.0467644718982195003823669022e0;
inline constexpr double a121 = 2.27331014751653820792359768449e0;
inline constexpr double a124 = -1.05344954667372501984066689879e1;
inline constexpr double a125 = -2.00087205822486249909675718444e0;
inline constexpr double a126 = -1.79589318631187989172765950534e1;
inline constexpr double a127 = 2.79488845294199600508499808837e1;
inline constexpr double a128 = -2.85899827713502369474065508674e0;
inline constexpr double a129 = -8.87285693353062954433549289258e0;
inline constexpr double a1210 = 1.23605671757943030647266201528e1;
inline constexpr double a1211 = 6.43392746015763530355970484046e-1;

inline constexpr double b1 = 5.42937341165687622380535766363e-2;
inline constexpr double b6 = 4.45031289275240888144113950566e0;
inline constexpr double b7 = 1.89151789931450038304281599044e0;
inline constexpr double b8 = -5.8012039600105847814672114227e0;
inline constexpr double b9 = 3.1116436695781989440891606237e-1;
inline constexpr double b10 = -1.52160949662516078556178806805e-1;
inline constexpr double b11 = 2.01365400804030348374776537501e-1;
inline constexpr double b12 = 4.47106157277725905176885569043e-2;

inline constexpr double bhh1 = 0.244094488188976377952755905512e+00;
inline constexpr double bhh2 = 0.733846688281611857341361741547e+00;
inline constexpr double bhh3 = 0.220588235294117647058823529412e-01;

inline constexpr double er1 = 0.1312004499419488073250102996e-01;
inline constexpr double er6 = -0.1225156446376204440720569753e+01;
inline constexpr double er7 = -0.4957589496572501915214079952e+00;
inline constexpr double er8 = 0.1664377182454986536961530415e+01;
inline constexpr double er9 = -0.3503288487499736816886487290e+00;
inline constexpr double er10 = 0.3341791187130174790297318841e+00;
inline constexpr double er11 = 0.8192320648511571246570742613e-01;
inline constexpr double er12 = -0.2235530786388629525884427845e-01;
}  // namespace dop853

// Integrates y' = rhs(x, y) from x0 through the monotone list of targets,
// landing exactly on each. observe(x, y) is called after every accepted step.
template <std::size_t N, class Rhs, class Observe>
OdeResult<N> integrate_dop853(Rhs&& rhs, double x0, const CState<N>& y0,
                              std::span<const double> targets, const OdeOptions& opt,
                              Observe&& observe) {
  using namespace dop853;
  using C = std::complex<double>;
  OdeResult<N> out;
  out.states.reserve(targets.size());
  if (targets.empty()) return out;
  const double dir = (targets.back() >= x0) ? 1.0 : -1.0;

  auto axpy = [](const CState<N>& y, double h, std::initializer_list<std::pair<double, const CState<N>*>> ks) {
    CState<N> r = y;
    for (std::size_t i = 0; i < N; ++i) {
      C acc{};
      for (const auto& [a, k] : ks) acc += a * (*k)[i];
      r[i] += h * acc;
    }
    return r;
  };
  auto scale_of = [&](const CState<N>& a, const CState<N>& b, std::size_t i) {
    return opt.atol + opt.rtol * std::max(std::abs(a[i]), std::abs(b[i]));
  };

  double x = x0;
  CState<N> y = y0;
  CState<N> k1 = rhs(x, y);
  ++out.evaluations;

  double h = opt.h_init;
  const double span_total = std::abs(targets.back() - x0);
  if (h <= 0.0 && span_total > 0.0) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt.atol + opt.rtol * std::abs(y[i]);
      d0 += std::norm(y[i]) / (sk * sk);
      d1 += std::norm(k1[i]) / (sk * sk);
    }
    double h0 = (d0 <= 1e-10 || d1 <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(d0 / d1);
    h0 = std::min(h0, span_total);
    const CState<N> y1 = axpy(y, dir * h0, {{1.0, &k1}});
    const CState<N> f1 = rhs(x + dir * h0, y1);
    ++out.evaluations;
    double d2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt.atol + opt.rtol * std::abs(y[i]);
      d2 += std::norm(f1[i] - k1[i]) / (sk * sk);
    }
    d2 = std::sqrt(d2) / h0;
    const double dm = std::max(std::sqrt(d1), d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 8.0);
    h = std::min({100.0 * h0, h1, span_total});
  }
  h = std::max(std::abs(h), 1e-12 * std::max(1.0, span_total));

  std::size_t next = 0;
  while (next < targets.size() && dir * (targets[next] - x) <= 0.0) out.states.push_back(y), ++next;

  bool last_rejected = false;
  while (next < targets.size()) {
    if (out.accepted + out.rejected >= opt.max_steps)
      fail(ErrorCode::NonConverged, "ODE integrator exceeded its step budget");
    const double remaining = std::abs(targets[next] - x);
    bool lands = false;
    double hs = h;
    if (hs >= remaining * (1.0 - 1e-12)) {
      hs = remaining;
      lands = true;
    }
    if (hs < 1e-15 * std::max(1.0, std::abs(x)))
      fail(ErrorCode::StepUnderflow, "step size underflow near x = " + std::to_string(x));
    const double hd = dir * hs;

    const CState<N> k2 = rhs(x + c2 * hd, axpy(y, hd, {{a21, &k1}}));
    const CState<N> k3 = rhs(x + c3 * hd, axpy(y, hd, {{a31, &k1}, {a32, &k2}}));
    const CState<N> k4 = rhs(x + c4 * hd, axpy(y, hd, {{a41, &k1}, {a43, &k3}}));
    const CState<N> k5 = rhs(x + c5 * hd, axpy(y, hd, {{a51, &k1}, {a53, &k3}, {a54, &k4}}));
    const CState<N> k6 = rhs(x + c6 * hd, axpy(y, hd, {{a61, &k1}, {a64, &k4}, {a65, &k5}}));
    const CState<N> k7 = rhs(x + c7 * hd, axpy(y, hd, {{a71, &k1}, {a74, &k4}, {a75, &k5}, {a76, &k6}}));
    const CState<N> k8 =
        rhs(x + c8 * hd, axpy(y, hd, {{a81, &k1}, {a84, &k4}, {a85, &k5}, {a86, &k6}, {a87, &k7}}));
    const CState<N> k9 = rhs(x + c9 * hd, axpy(y, hd,
                                               {{a91, &k1}, {a94, &k4}, {a95, &k5}, {a96, &k6},
                                                {a97, &k7}, {a98, &k8}}));
    const CState<N> k10 = rhs(x + c10 * hd, axpy(y, hd,
                                                 {{a101, &k1}, {a104, &k4}, {a105, &k5}, {a106, &k6},
                                                  {a107, &k7}, {a108, &k8}, {a109, &k9}}));
    const CState<N> k11 = rhs(x + c11 * hd, axpy(y, hd,
                                                 {{a111, &k1}, {a114, &k4}, {a115, &k5}, {a116, &k6},
                                                  {a117, &k7}, {a118, &k8}, {a119, &k9}, {a1110, &k10}}));
    const double xe = lands ? targets[next] : x + hd;
    const CState<N> k12 = rhs(xe, axpy(y, hd,
                                       {{a121, &k1}, {a124, &k4}, {a125, &k5}, {a126, &k6}, {a127, &k7},
                                        {a128, &k8}, {a129, &k9}, {a1210, &k10}, {a1211, &k11}}));
    out.evaluations += 11;

    CState<N> inc{};
    for (std::size_t i = 0; i < N; ++i)
      inc[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] + b10 * k10[i] +
               b11 * k11[i] + b12 * k12[i];
    CState<N> ynew{};
    for (std::size_t i = 0; i < N; ++i) ynew[i] = y[i] + hd * inc[i];

    double err3 = 0.0, err5 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = scale_of(y, ynew, i);
      const C e3 = inc[i] - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k12[i];
      const C e5 = er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] + er9 * k9[i] +
                   er10 * k10[i] + er11 * k11[i] + er12 * k12[i];
      err3 += std::norm(e3) / (sk * sk);
      err5 += std::norm(e5) / (sk * sk);
    }
    double deno = err5 + 0.01 * err3;
    if (deno <= 0.0) deno = 1.0;
    const double err = hs * err5 / std::sqrt(static_cast<double>(N) * deno);

    double fac = std::pow(err, 0.125) / 0.9;
    fac = std::clamp(fac, 1.0 / 6.0, 1.0 / 0.333);
    double hnew = hs / fac;

    if (err <= 1.0) {
      ++out.accepted;
      double ymax = 0.0;
      for (std::size_t i = 0; i < N; ++i) ymax = std::max(ymax, std::abs(ynew[i]));
      out.error_estimate += err * (opt.atol + opt.rtol * ymax);
      x = xe;
      y = ynew;
      k1 = rhs(x, y);
      ++out.evaluations;
      observe(x, y);
      if (last_rejected) hnew = std::min(hnew, hs);
      last_rejected = false;
      if (lands) {
        out.states.push_back(y);
        ++next;
        while (next < targets.size() && dir * (targets[next] - x) <= 0.0) out.states.push_back(y), ++next;
        // do not let a short landing step shrink the next one
        hnew = std::max(hnew, h);
      }
      h = hnew;
    } else {
      ++out.rejected;
      last_rejected = true;
      h = hs / std::min(1.0 / 0.333, fac);
    }
  }
  return out;
}

template <std::size_t N, class Rhs>
OdeResult<N> integrate_dop853(Rhs&& rhs, double x0, const CState<N>& y0,
                              std::span<const double> targets, const OdeOptions& opt = {}) {
  return integrate_dop853<N>(std::forward<Rhs>(rhs), x0, y0, targets, opt,
                             [](double, const CState<N>&) {});
}

}  // namespace halfline
