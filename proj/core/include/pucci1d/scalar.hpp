#pragma once

#include "pucci1d/model.hpp"

namespace pucci1d {

/// Extremal operator applied to a curvature value m: the plus branch takes
/// slope Lambda on m >= 0 and lambda on m < 0; the minus branch swaps them.
double pucci_eval(const PucciParams& params, double m);

/// Inverse map: the unique m' with pucci_eval(params, m') == m.
double pucci_inverse(const PucciParams& params, double m);

/// Closed-form scalar data of the constant-coefficient problem
/// -M(u'') + v_inf u = f(u):
///   g(s) = f(s) - v_inf s,   G(s) = F(s) - v_inf s^2 / 2,
///   center               the unique positive root of f(s)/s = v_inf
///                        (g < 0 below it, g > 0 above it),
///   homoclinic_amplitude the unique positive root of G on (center, inf),
///   g_min                min of G on [0, inf) (= G(center), negative).
class ScalarLandscape {
 public:
  ScalarLandscape(Nonlinearity f, double v_inf);

  double g(double s) const { return f_.eval(s) - v_inf_ * s; }
  double G(double s) const {
    return f_.primitive(s) - 0.5 * v_inf_ * s * s;
  }

  const Nonlinearity& f() const { return f_; }
  double v_inf() const { return v_inf_; }
  double center() const { return center_; }
  double homoclinic_amplitude() const { return amplitude_; }
  double g_min() const { return g_min_; }

  std::string to_json() const;

 private:
  Nonlinearity f_;
  double v_inf_;
  double center_;
  double amplitude_;
  double g_min_;
};

/// Unique positive root of f(s)/s = v_inf, found by geometric bracket
/// expansion from s = 1 and bisection to 1e-12 relative width.
double find_center(const Nonlinearity& f, double v_inf);

/// Unique root of G on (center, inf).
double find_homoclinic_amplitude(const ScalarLandscape& landscape);

/// Core amplitudes of the glued ground states.
///   low            solves G(s) = (1 - lambda/Lambda) G(center), s < center
///   plus_amplitude same level, the root in (center, homoclinic_amplitude);
///                  this is the plus-branch ground-state maximum
///   minus_amplitude solves G(s) = (1 - Lambda/lambda) G(center),
///                  s >= homoclinic_amplitude; the minus-branch maximum
/// Degenerate lambda == Lambda returns (center, center, homoclinic_amplitude).
struct MatchingLevels {
  double low;
  double plus_amplitude;
  double minus_amplitude;
};
MatchingLevels matching_levels(const PucciParams& params,
                               const ScalarLandscape& landscape);

/// Root of f(s)/s = v0: every positive solution of the full problem has
/// sup norm at least this value.
double solution_sup_floor(const Nonlinearity& f, double v0);

/// deficit = -min_{s>=0} g(s) and t_min = 2 * deficit, the forcing level
/// beyond which forced solutions obey the quadratic lower bound.
struct ForcingThreshold {
  double deficit;
  double t_min;
};
ForcingThreshold forcing_threshold(const Nonlinearity& f, double v_inf);

}  // namespace pucci1d
