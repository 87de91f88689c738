#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace halfline {

// Ordered by strength: a potential of a stronger class also satisfies the weaker ones.
enum class DecayClass { Integrable = 0, FirstMoment = 1, SmoothRapid = 2 };

std::string_view to_string(DecayClass c);

struct Moments {
  double integral = 0.0;  // int V
  double integral_error = 0.0;
  double integral_sq = 0.0;  // int V^2
  double integral_sq_error = 0.0;
  double v0 = 0.0, dv0 = 0.0, d2v0 = 0.0;
};

// Real potential on [0, inf) built from a catalog of analytic shapes.
// Immutable; scale and sum produce new values.
class Potential {
 public:
  enum class Shape { Exponential, Gaussian, Bump };
  struct Term {
    Shape shape;
    double coeff;
    double param;  // mu, sigma or support radius a
  };

  Potential();  // V = 0

  double operator()(double x) const { return eval(x, 0); }
  // order-th derivative; arbitrary order.
  double eval(double x, int order = 0) const;
  // All derivatives 0..max_order at x.
  std::vector<double> derivatives(double x, int max_order) const;

  DecayClass decay_class() const { return class_; }
  // Upper bounds for int_x^inf |V| and int_x^inf y|V|, nonincreasing in x.
  double tail_abs(double x) const;
  double tail_abs_moment(double x) const;
  // Bound for sup max(-V, 0).
  double sup_negative_part() const;
  // Smallest x with tail_abs(x) <= eps; 0 for the zero potential.
  double truncation_point(double eps) const;
  // Shortest intrinsic length and points where the profile is not smooth.
  double length_scale() const;
  std::vector<double> breakpoints() const;
  double coefficient_scale() const;  // sum of |c|

  const Moments& moments() const { return moments_; }
  bool is_zero() const;
  std::span<const Term> terms() const { return terms_; }
  std::string spec() const;

  // A potential may declare a weaker decay class than its shapes guarantee.
  Potential with_decay_class(DecayClass weaker) const;

  friend Potential make_exponential(double c, double mu);
  friend Potential make_gaussian(double c, double sigma);
  friend Potential make_compact_bump(double c, double a);
  friend Potential scale(const Potential& v, double factor);
  friend Potential sum(const Potential& a, const Potential& b);

 private:
  explicit Potential(std::vector<Term> terms, DecayClass cls);
  void compute_moments();

  std::vector<Term> terms_;
  DecayClass class_ = DecayClass::SmoothRapid;
  Moments moments_;
};

Potential make_exponential(double c, double mu);
Potential make_gaussian(double c, double sigma);
Potential make_compact_bump(double c, double a);
Potential scale(const Potential& v, double factor);
Potential sum(const Potential& a, const Potential& b);

// Grammar: exp:c,mu | gauss:c,sigma | bump:c,a | sum:<spec>+<spec> | scale:<f>*<spec>
Potential parse_potential(std::string_view spec);

// int_0^1 exp(1 - 1/(1-t^2)) dt
double bump_unit_integral();

}  // namespace halfline
