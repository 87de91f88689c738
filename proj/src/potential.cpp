#include "halfline/potential.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "halfline/errors.hpp"
#include "halfline/quadrature.hpp"

namespace halfline {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

double bump_profile(double x, double a) {
  if (x >= a || x <= -a) return 0.0;
  const double u = x / a;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

// Taylor coefficients of exp(1 - 1/(1-(x+d)^2/a^2)) in d, up to order n.
std::vector<double> bump_jet(double x, double a, int n) {
  std::vector<double> e(n + 1, 0.0);
  if (x >= a || x <= -a) return e;
  const double s0 = 1.0 - (x / a) * (x / a);
  const double s1 = -2.0 * x / (a * a), s2 = -1.0 / (a * a);
  std::vector<double> r(n + 1, 0.0);
  r[0] = 1.0 / s0;
  for (int k = 1; k <= n; ++k) {
    double acc = s1 * r[k - 1];
    if (k >= 2) acc += s2 * r[k - 2];
    r[k] = -acc / s0;
  }
  const double g0 = 1.0 - r[0];
  if (g0 < -700.0) return e;
  e[0] = std::exp(g0);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * (-r[j]) * e[k - j];
    e[k] = acc / k;
  }
  return e;
}

void add_term_derivatives(const Potential::Term& t, double x, std::vector<double>& out) {
  const int n = static_cast<int>(out.size()) - 1;
  switch (t.shape) {
    case Potential::Shape::Exponential: {
      const double base = t.coeff * std::exp(-t.param * x);
      double f = base;
      for (int j = 0; j <= n; ++j) {
        out[j] += f;
        f *= -t.param;
      }
      break;
    }
    case Potential::Shape::Gaussian: {
      // d^j/dx^j e^{-u^2} = (-1/sigma)^j H_j(u) e^{-u^2}
      const double u = x / t.param;
      const double g = t.coeff * std::exp(-u * u);
      double hm1 = 0.0, h = 1.0, scale = 1.0;
      for (int j = 0; j <= n; ++j) {
        out[j] += scale * h * g;
        const double next = 2.0 * u * h - 2.0 * j * hm1;
        hm1 = h;
        h = next;
        scale *= -1.0 / t.param;
      }
      break;
    }
    case Potential::Shape::Bump: {
      const auto e = bump_jet(x, t.param, n);
      double fact = 1.0;
      for (int j = 0; j <= n; ++j) {
        if (j > 0) fact *= j;
        out[j] += t.coeff * fact * e[j];
      }
      break;
    }
  }
}

double term_value(const Potential::Term& t, double x) {
  switch (t.shape) {
    case Potential::Shape::Exponential: return t.coeff * std::exp(-t.param * x);
    case Potential::Shape::Gaussian: return t.coeff * std::exp(-(x / t.param) * (x / t.param));
    case Potential::Shape::Bump: return t.coeff * bump_profile(x, t.param);
  }
  return 0.0;
}

double unit_tail(const Potential::Term& t, double x) {
  switch (t.shape) {
    case Potential::Shape::Exponential: return std::exp(-t.param * x) / t.param;
    case Potential::Shape::Gaussian: return t.param * kSqrtPi / 2.0 * std::erfc(x / t.param);
    case Potential::Shape::Bump:
      // the profile decreases on [0,a), so (a-x) profile(x) dominates the tail
      return x >= t.param ? 0.0 : (t.param - std::max(x, 0.0)) * bump_profile(std::max(x, 0.0), t.param);
  }
  return 0.0;
}

double unit_tail_moment(const Potential::Term& t, double x) {
  switch (t.shape) {
    case Potential::Shape::Exponential: {
      const double mu = t.param;
      return std::exp(-mu * x) * (x / mu + 1.0 / (mu * mu));
    }
    case Potential::Shape::Gaussian:
      return t.param * t.param / 2.0 * std::exp(-(x / t.param) * (x / t.param));
    case Potential::Shape::Bump: return t.param * unit_tail(t, x);
  }
  return 0.0;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string term_spec(const Potential::Term& t) {
  const char* name = t.shape == Potential::Shape::Exponential ? "exp"
                     : t.shape == Potential::Shape::Gaussian  ? "gauss"
                                                              : "bump";
  return std::string(name) + ":" + fmt(t.coeff) + "," + fmt(t.param);
}

// int_0^inf of the product of two unit shapes, with an error estimate.
std::pair<double, double> product_integral(const Potential::Term& s, const Potential::Term& t) {
  using S = Potential::Shape;
  if (s.shape == S::Exponential && t.shape == S::Exponential) return {1.0 / (s.param + t.param), 0.0};
  if (s.shape == S::Gaussian && t.shape == S::Gaussian) {
    const double q = 1.0 / (s.param * s.param) + 1.0 / (t.param * t.param);
    return {kSqrtPi / 2.0 / std::sqrt(q), 0.0};
  }
  if ((s.shape == S::Exponential && t.shape == S::Gaussian) ||
      (s.shape == S::Gaussian && t.shape == S::Exponential)) {
    const double mu = s.shape == S::Exponential ? s.param : t.param;
    const double sg = s.shape == S::Gaussian ? s.param : t.param;
    const double z = mu * sg / 2.0;
    // e^{z^2} erfc(z) evaluated without overflow for large z
    double scaled;
    if (z < 20.0) {
      scaled = std::exp(z * z) * std::erfc(z);
    } else {
      const double iz2 = 1.0 / (2.0 * z * z);
      scaled = (1.0 - iz2 + 3.0 * iz2 * iz2 - 15.0 * iz2 * iz2 * iz2) / (z * kSqrtPi);
    }
    return {sg * kSqrtPi / 2.0 * scaled, 0.0};
  }
  double end = 0.0;
  for (const auto* u : {&s, &t})
    if (u->shape == S::Bump) end = (end == 0.0) ? u->param : std::min(end, u->param);
  Potential::Term us{s.shape, 1.0, s.param}, ut{t.shape, 1.0, t.param};
  auto r = integrate<double>([&](double x) { return term_value(us, x) * term_value(ut, x); }, 0.0,
                             end, 1e-15, 1e-14);
  return {r.value, r.error};
}

class SpecParser {
 public:
  explicit SpecParser(std::string text) : s_(std::move(text)) {}

  Potential parse() {
    Potential v = parse_spec();
    if (pos_ != s_.size()) error("unexpected trailing text");
    return v;
  }

 private:
  Potential parse_spec() {
    const std::size_t colon = s_.find(':', pos_);
    if (colon == std::string::npos) error("expected '<kind>:'");
    const std::string kind = s_.substr(pos_, colon - pos_);
    pos_ = colon + 1;
    if (kind == "sum") {
      Potential a = parse_spec();
      expect('+');
      Potential b = parse_spec();
      return sum(a, b);
    }
    if (kind == "scale") {
      const double f = number();
      expect('*');
      return scale(parse_spec(), f);
    }
    const double c = number();
    expect(',');
    const double p = number();
    if (kind == "exp") return make_exponential(c, p);
    if (kind == "gauss") return make_gaussian(c, p);
    if (kind == "bump") return make_compact_bump(c, p);
    error("unknown potential kind '" + kind + "'");
  }

  double number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) error("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    if (!std::isfinite(v)) error("number is not finite");
    return v;
  }

  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::InvalidArgument,
         "potential spec '" + s_ + "' at offset " + std::to_string(pos_) + ": " + msg);
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(DecayClass c) {
  switch (c) {
    case DecayClass::Integrable: return "INTEGRABLE";
    case DecayClass::FirstMoment: return "FIRST_MOMENT";
    case DecayClass::SmoothRapid: return "SMOOTH_RAPID";
  }
  return "?";
}

double bump_unit_integral() {
  static const double value =
      integrate<double>([](double t) { return bump_profile(t, 1.0); }, 0.0, 1.0, 1e-16, 1e-15).value;
  return value;
}

Potential::Potential() { compute_moments(); }

Potential::Potential(std::vector<Term> terms, DecayClass cls) : terms_(std::move(terms)), class_(cls) {
  compute_moments();
}

void Potential::compute_moments() {
  Moments m;
  for (const auto& t : terms_) {
    switch (t.shape) {
      case Shape::Exponential: m.integral += t.coeff / t.param; break;
      case Shape::Gaussian: m.integral += t.coeff * t.param * kSqrtPi / 2.0; break;
      case Shape::Bump:
        m.integral += t.coeff * t.param * bump_unit_integral();
        m.integral_error += std::abs(t.coeff) * t.param * 1e-15;
        break;
    }
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    for (std::size_t j = i; j < terms_.size(); ++j) {
      auto [val, err] = product_integral(terms_[i], terms_[j]);
      const double w = (i == j ? 1.0 : 2.0) * terms_[i].coeff * terms_[j].coeff;
      m.integral_sq += w * val;
      m.integral_sq_error += std::abs(w) * err;
    }
  }
  const auto d = derivatives(0.0, 2);
  m.v0 = d[0];
  m.dv0 = d[1];
  m.d2v0 = d[2];
  moments_ = m;
}

double Potential::eval(double x, int order) const {
  if (order == 0) {
    double s = 0.0;
    for (const auto& t : terms_) s += term_value(t, x);
    return s;
  }
  return derivatives(x, order)[order];
}

std::vector<double> Potential::derivatives(double x, int max_order) const {
  std::vector<double> out(max_order + 1, 0.0);
  for (const auto& t : terms_) add_term_derivatives(t, x, out);
  return out;
}

double Potential::tail_abs(double x) const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff) * unit_tail(t, x);
  return s;
}

double Potential::tail_abs_moment(double x) const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff) * unit_tail_moment(t, x);
  return s;
}

double Potential::sup_negative_part() const {
  double s = 0.0;
  for (const auto& t : terms_)
    if (t.coeff < 0.0) s -= t.coeff;
  return s;
}

double Potential::truncation_point(double eps) const {
  if (tail_abs(0.0) <= eps) return 0.0;
  double hi = 1.0;
  while (tail_abs(hi) > eps) {
    hi *= 2.0;
    if (hi > 1e8) fail(ErrorCode::DecayTooWeak, "tail does not fall below the requested level");
  }
  double lo = 0.0;
  for (int i = 0; i < 80 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail_abs(mid) > eps ? lo : hi) = mid;
  }
  return hi;
}

double Potential::length_scale() const {
  double L = 0.0;
  for (const auto& t : terms_) {
    if (t.coeff == 0.0) continue;
    const double l = t.shape == Shape::Exponential ? 1.0 / t.param
                     : t.shape == Shape::Gaussian  ? t.param
                                                   : 0.5 * t.param;
    L = (L == 0.0) ? l : std::min(L, l);
  }
  return L == 0.0 ? 1.0 : L;
}

std::vector<double> Potential::breakpoints() const {
  std::vector<double> b;
  for (const auto& t : terms_)
    if (t.shape == Shape::Bump && t.coeff != 0.0) b.push_back(t.param);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

bool Potential::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coeff == 0.0; });
}

double Potential::coefficient_scale() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

std::string Potential::spec() const {
  if (terms_.empty()) return "exp:0,1";
  std::string out = term_spec(terms_.back());
  for (std::size_t i = terms_.size() - 1; i-- > 0;) out = "sum:" + term_spec(terms_[i]) + "+" + out;
  return out;
}

Potential Potential::with_decay_class(DecayClass weaker) const {
  if (static_cast<int>(weaker) > static_cast<int>(class_))
    fail(ErrorCode::InvalidArgument, "cannot claim a stronger decay class than the shapes provide");
  Potential v = *this;
  v.class_ = weaker;
  return v;
}

Potential make_exponential(double c, double mu) {
  if (!(mu > 0.0) || !std::isfinite(c) || !std::isfinite(mu))
    fail(ErrorCode::InvalidArgument, "exponential needs finite c and mu > 0");
  return Potential({{Potential::Shape::Exponential, c, mu}}, DecayClass::SmoothRapid);
}

Potential make_gaussian(double c, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(c) || !std::isfinite(sigma))
    fail(ErrorCode::InvalidArgument, "gaussian needs finite c and sigma > 0");
  return Potential({{Potential::Shape::Gaussian, c, sigma}}, DecayClass::SmoothRapid);
}

Potential make_compact_bump(double c, double a) {
  if (!(a > 0.0) || !std::isfinite(c) || !std::isfinite(a))
    fail(ErrorCode::InvalidArgument, "bump needs finite c and a > 0");
  return Potential({{Potential::Shape::Bump, c, a}}, DecayClass::SmoothRapid);
}

Potential scale(const Potential& v, double factor) {
  if (!std::isfinite(factor)) fail(ErrorCode::InvalidArgument, "scale factor must be finite");
  auto terms = v.terms_;
  for (auto& t : terms) t.coeff *= factor;
  return Potential(std::move(terms), v.class_);
}

Potential sum(const Potential& a, const Potential& b) {
  auto terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  const auto cls = static_cast<DecayClass>(std::min(static_cast<int>(a.class_), static_cast<int>(b.class_)));
  return Potential(std::move(terms), cls);
}

Potential parse_potential(std::string_view spec) {
  std::string s;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s.empty()) fail(ErrorCode::InvalidArgument, "empty potential spec");
  return SpecParser(std::move(s)).parse();
}

}  // namespace halfline
