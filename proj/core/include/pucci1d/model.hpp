#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pucci1d {

/// Base class for all errors thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct validation_error : error {
  using error::error;
};
/// Root bracketing / landscape construction failed.
struct landscape_error : error {
  using error::error;
};
struct integration_error : error {
  using error::error;
};
struct domain_too_small_error : error {
  using error::error;
};
struct solver_stall_error : error {
  using error::error;
};
struct fit_error : error {
  using error::error;
};
struct not_applicable_error : error {
  using error::error;
};
struct equilibrium_error : error {
  using error::error;
};

// ---------------------------------------------------------------------------
// Extremal operator parameters
// ---------------------------------------------------------------------------

enum class Branch { plus, minus };

/// Ellipticity pair 0 < lambda <= Lambda plus the branch selecting which
/// extremal operator acts on u''. When lambda == Lambda both branches reduce
/// to lambda * u''.
struct PucciParams {
  double lambda;
  double Lambda;
  Branch branch;

  PucciParams(double lam, double Lam, Branch b);

  bool degenerate() const { return lambda == Lambda; }
};

// ---------------------------------------------------------------------------
// Nonlinearity
// ---------------------------------------------------------------------------

enum class NonlinearityKind { power_sum, log_hybrid };

struct PowerTerm {
  double a;  // coefficient, > 0
  double p;  // exponent, > 1
};

/// Source term f(s), extended by zero to s <= 0.
///
/// power_sum:  f(s) = sum_i a_i s^{p_i}
/// log_hybrid: f(s) = eta(s) s^p + (1 - eta(s)) C s log s, with a C^2 cutoff
///             eta equal to 1 on [0,2] and 0 on [3,inf), eta' <= 0, and
///             C large enough that C log s >= s^{p-1} on [2,3].
///
/// eta0 is the small-s decay exponent: s^{-1-eta0} f(s) -> 0 as s -> 0+,
/// which requires eta0 < min_i(p_i - 1).
class Nonlinearity {
 public:
  static Nonlinearity power_sum(std::vector<PowerTerm> terms, double eta0);
  static Nonlinearity log_hybrid(double p, double eta0,
                                 std::optional<double> C = std::nullopt);

  double eval(double s) const;
  double derivative(double s) const;
  /// Primitive F(s) = integral_0^s f, F(s) = 0 for s <= 0.
  double primitive(double s) const;
  /// Extended-precision evaluation for the phase-plane integrator.
  long double eval_ld(long double s) const;
  /// Extended-precision primitive (exact for power sums; the log-hybrid
  /// blend region falls back to double precision).
  long double primitive_ld(long double s) const;

  NonlinearityKind kind() const { return kind_; }
  const std::vector<PowerTerm>& terms() const { return terms_; }
  double eta0() const { return eta0_; }
  double log_coefficient() const { return C_; }
  /// min_i p_i for power_sum, p for log_hybrid.
  double min_exponent() const;

  std::string to_json() const;
  static Nonlinearity from_json(const std::string& text);

 private:
  Nonlinearity() = default;

  NonlinearityKind kind_ = NonlinearityKind::power_sum;
  std::vector<PowerTerm> terms_;  // power_sum terms; log_hybrid stores {1, p}
  double eta0_ = 0.0;
  double C_ = 0.0;          // log_hybrid tail coefficient
  double F_cut_lo_ = 0.0;   // log_hybrid: F(2)
  double F_cut_hi_ = 0.0;   // log_hybrid: F(3)
};

// ---------------------------------------------------------------------------
// Potential
// ---------------------------------------------------------------------------

enum class PotentialKind { constant, well, monotone, reflected, tabulated };

/// Bounded potential V(x) with positive infimum. Four closed-form families
/// plus a tabulated carrier:
///   constant:  V == value
///   well:      V(x) = v_inf - c0 * exp(-rate |x|)   (even, attaining min at 0)
///   monotone:  V(x) = v_lower + (v_upper - v_lower) * (1 + tanh(x/width)) / 2
///   reflected: wraps another potential, evaluating it at -x
///   tabulated: piecewise-linear interpolation of samples
class Potential {
 public:
  static Potential constant(double value);
  static Potential well(double v_inf, double c0, double rate);
  static Potential monotone(double v_lower, double v_upper, double width);
  static Potential tabulated(std::vector<double> x, std::vector<double> v);

  double eval(double x) const;
  double derivative(double x) const;

  /// inf_R V (exact for closed-form kinds, sample min for tabulated).
  double v0() const;
  /// Limit at +inf (well/constant: the common limit; monotone: v_upper).
  double v_inf() const;

  PotentialKind kind() const { return kind_; }
  double well_depth() const { return c0_; }
  double well_rate() const { return rate_; }
  double lower_limit() const { return v_lower_; }
  double upper_limit() const { return v_upper_; }
  const Potential* inner() const { return inner_.get(); }

  std::string to_json() const;
  static Potential from_json(const std::string& text);

  friend Potential reflect(const Potential& V);

 private:
  Potential() = default;

  PotentialKind kind_ = PotentialKind::constant;
  double value_ = 0.0;                  // constant
  double v_inf_ = 0.0, c0_ = 0.0, rate_ = 0.0;  // well
  double v_lower_ = 0.0, v_upper_ = 0.0, width_ = 1.0;  // monotone
  std::shared_ptr<const Potential> inner_;              // reflected
  std::vector<double> tab_x_, tab_v_;                   // tabulated
};

/// x |-> V(-x). Even kinds (constant, well) are returned unchanged,
/// reflecting twice is the identity bit-exactly for every kind.
Potential reflect(const Potential& V);

// ---------------------------------------------------------------------------
// Bump
// ---------------------------------------------------------------------------

/// Even C^2 cutoff: 1 on [0, radius], 0 on [2*radius, inf), nonincreasing on
/// [0, inf), realized by a quintic smoothstep on [radius, 2*radius].
class Bump {
 public:
  explicit Bump(double radius);

  double eval(double x) const;
  double radius() const { return radius_; }

 private:
  double radius_;
};

// ---------------------------------------------------------------------------
// Profile
// ---------------------------------------------------------------------------

enum class Provenance { constructed, solved, loaded };

/// Function samples on the uniform grid x_i = (i - n) h, i = 0..2n, with
/// half-length L = n h. Carrier for solutions and ground states.
class Profile {
 public:
  Profile(double L, double h, Provenance tag);
  Profile(double L, double h, std::vector<double> values, Provenance tag);

  double L() const { return L_; }
  double h() const { return h_; }
  std::size_t size() const { return values_.size(); }
  std::size_t center_index() const { return half_; }
  double x(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(half_)) * h_;
  }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  Provenance provenance() const { return tag_; }

  /// Linear interpolation between grid nodes; clamped outside [-L, L].
  double interp(double x) const;

  /// Centered first difference at interior node i (one-sided at the ends).
  double d1(std::size_t i) const;
  /// Centered second difference at interior node i (0 at the ends).
  double d2(std::size_t i) const;

  double sup_norm() const;
  std::size_t argmax() const;

  /// CSV with header "x,u"; round-trips bit-exactly.
  void save_csv(const std::string& path) const;
  static Profile load_csv(const std::string& path);

 private:
  double L_, h_;
  std::size_t half_;
  std::vector<double> values_;
  Provenance tag_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationItem {
  std::string name;
  bool passed;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationItem> items;

  bool all_passed() const;
  const ValidationItem* find(const std::string& name) const;
  std::string to_json() const;
};

enum class PotentialHypothesis { well, monotone };

/// Sampled checks of the sign, small-s decay, superlinearity and
/// monotone-ratio conditions. samples >= 10.
ValidationReport validate_nonlinearity(const Nonlinearity& f, int samples);

/// Sampled ratios f(theta * s) / f(s), the observable behind the
/// large-s limit condition.
std::vector<double> growth_ratios(const Nonlinearity& f, double theta,
                                  const std::vector<double>& s_values);

/// Sampled checks of positivity, shape and (for the well hypothesis) the
/// branch-dependent exponential gap bound on the grid [-L, L].
ValidationReport validate_potential(const Potential& V,
                                    PotentialHypothesis hypothesis,
                                    const PucciParams& params, double L = 30.0,
                                    double h = 0.01);

}  // namespace pucci1d
