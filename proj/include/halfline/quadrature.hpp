#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

namespace halfline {

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

namespace gk21 {

inline constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

// Gauss weights for xgk[1], xgk[3], ..., xgk[9]
inline constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// The 21 abscissae of [a,b] in ascending order.
inline std::array<double, 21> nodes(double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<double, 21> x{};
  for (int i = 0; i < 10; ++i) {
    x[i] = c - h * xgk[i];
    x[20 - i] = c + h * xgk[i];
  }
  x[10] = c;
  return x;
}

// Kronrod and Gauss sums from values at nodes(a,b).
template <class T>
std::pair<T, T> combine(const std::array<T, 21>& f, double a, double b) {
  const double h = 0.5 * (b - a);
  T kron = f[10] * wgk[10];
  T gauss{};
  for (int i = 0; i < 10; ++i) {
    const T pair = f[i] + f[20 - i];
    kron += pair * wgk[i];
    if (i % 2 == 1) gauss += pair * wg[i / 2];
  }
  return {kron * h, gauss * h};
}

}  // namespace gk21

template <class T, class F>
std::pair<T, double> gk21_rule(F&& f, double a, double b) {
  const auto x = gk21::nodes(a, b);
  std::array<T, 21> v{};
  for (int i = 0; i < 21; ++i) v[i] = f(x[i]);
  const auto [k, g] = gk21::combine(v, a, b);
  return {k, std::abs(k - g)};
}

// Globally adaptive bisection with G10K21 panels.
template <class T, class F>
QuadResult<T> integrate(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                        int max_intervals = 2000) {
  struct Piece {
    double a, b;
    T value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  QuadResult<T> out;
  if (a == b) return out;
  std::priority_queue<Piece> heap;
  auto first = gk21_rule<T>(f, a, b);
  out.evaluations = 21;
  heap.push({a, b, first.first, first.second});
  T total = first.first;
  double err = first.second;
  int count = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (count >= max_intervals) {
      out.converged = false;
      break;
    }
    Piece worst = heap.top();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) {
      out.converged = false;
      break;
    }
    heap.pop();
    auto left = gk21_rule<T>(f, worst.a, m);
    auto right = gk21_rule<T>(f, m, worst.b);
    out.evaluations += 42;
    total += left.first + right.first - worst.value;
    err += left.second + right.second - worst.error;
    heap.push({worst.a, m, left.first, left.second});
    heap.push({m, worst.b, right.first, right.second});
    ++count;
  }
  // re-sum to shed accumulated rounding from the running updates
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = esum;
  return out;
}

struct GaussLegendre {
  std::vector<double> x, w;
};

// n-point rule on [-1,1] by Newton iteration on P_n.
GaussLegendre gauss_legendre(int n);

}  // namespace halfline
