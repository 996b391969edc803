#pragma once

#include <vector>

#include "pucci1d/model.hpp"
#include "pucci1d/scalar.hpp"

namespace pucci1d {

// ---------------------------------------------------------------------------
// Phase-plane trajectories of -u'' = g(u) / mu
// ---------------------------------------------------------------------------

enum class EventKind { hits_center, hits_zero, derivative_zero };

struct TrajectoryEvent {
  EventKind kind;
  double x;
  double u;
  double du;
};

/// Samples of the initial value problem -u'' = g(u)/mu, (u(0), u'(0)) =
/// (alpha, 0), at spacing h. Integration is classical RK4 with 8 internal
/// substeps per sample in extended precision; events are located by bisection
/// inside the bracketing step to 1e-12. The march stops at x_max or at the
/// first hits_zero event. Energy (u'^2)/2 + G(u)/mu is conserved along
/// samples to integration tolerance.
class Trajectory {
 public:
  double mu() const { return mu_; }
  double alpha() const { return alpha_; }
  double h() const { return h_; }
  std::size_t size() const { return u_.size(); }
  double x(std::size_t i) const { return static_cast<double>(i) * h_; }
  double u(std::size_t i) const { return u_[i]; }
  double du(std::size_t i) const { return du_[i]; }
  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& du() const { return du_; }
  const std::vector<TrajectoryEvent>& events() const { return events_; }

  const TrajectoryEvent* first_event(EventKind kind) const;

 private:
  friend Trajectory integrate_ivp(const ScalarLandscape&, double, double,
                                  double, double);
  double mu_ = 1.0, alpha_ = 0.0, h_ = 0.0;
  std::vector<double> u_, du_;
  std::vector<TrajectoryEvent> events_;
};

Trajectory integrate_ivp(const ScalarLandscape& landscape, double mu,
                         double alpha, double x_max, double h);

/// Orbit type of the amplitude alpha, decided by the sign of G(alpha):
/// negative energy orbits are periodic, positive ones cross zero, and the
/// zero-energy amplitude (within a 1e-9 relative band) is the homoclinic.
/// Amplitudes within the band around the center are rejected (equilibrium).
enum class OrbitClass { Crossing, Homoclinic, Periodic };
OrbitClass classify_amplitude(const ScalarLandscape& landscape, double alpha);

// ---------------------------------------------------------------------------
// Glued ground states
// ---------------------------------------------------------------------------

class GroundState;

struct ProbeResult {
  double sup_error;
  bool low_signal;  // |u(z)| below 1e-6 of the max
};

/// Re-integrates u'' = (M)^{-1}(-g(u)) both ways from the state read off the
/// stored construction at the node nearest z and returns the sup distance to
/// the stored values — a numerical witness of unique solvability of the IVP.
ProbeResult uniqueness_probe(const GroundState& gs, double z);

/// The even, positive, decaying solution of -M(u'') + v_inf u = f(u) built by
/// gluing the two constant-slope phase-plane branches at the height where the
/// curvature changes sign (u = center, at x = +-y1):
///   plus branch:  lambda-slope core from plus_amplitude, Lambda-slope tail
///   minus branch: Lambda-slope core from minus_amplitude, lambda-slope tail
/// The tail is generated backward from a far-field zero-energy seed, which
/// keeps it on the homoclinic orbit to machine accuracy.
class GroundState {
 public:
  const Profile& profile() const { return u_; }
  const std::vector<double>& du() const { return du_; }
  const PucciParams& params() const { return params_; }
  const ScalarLandscape& landscape() const { return landscape_; }

  double y1() const { return y1_; }
  /// Inflection location (coincides with the glue point).
  double z() const { return y1_; }
  double max_value() const { return u_[u_.center_index()]; }
  double decay_c1() const { return c1_; }
  double decay_c2() const { return c2_; }
  const MatchingLevels& levels() const { return levels_; }

  /// One-sided first/second derivative gaps at the glue point.
  double glue_gap_d1() const { return glue_d1_; }
  double glue_gap_d2() const { return glue_d2_; }

  /// Max |-M(D2 u) + v_inf u - f(u)| over interior nodes whose centered
  /// stencil does not straddle +-y1 (u''' jumps there, see glue_residual).
  double residual_sup() const;
  /// Same residual over the straddling nodes only (first order in h).
  double glue_residual() const;

  /// Node-exact restriction to a smaller half-length.
  Profile restricted(double newL) const;

  /// CSV with header "x,u,up,upp".
  void save_csv(const std::string& path) const;
  std::string to_json() const;

 private:
  friend GroundState build_ground_state(const PucciParams&,
                                        const ScalarLandscape&, double,
                                        double);
  GroundState(PucciParams p, ScalarLandscape ls, Profile u)
      : params_(p), landscape_(std::move(ls)), u_(std::move(u)) {}

  PucciParams params_;
  ScalarLandscape landscape_;
  Profile u_;
  std::vector<double> du_;
  // extended-precision construction states; seeds for uniqueness_probe
  std::vector<long double> uld_, duld_;
  MatchingLevels levels_{};
  double y1_ = 0.0;
  double c1_ = 0.0, c2_ = 0.0;
  double glue_d1_ = 0.0, glue_d2_ = 0.0;

  friend ProbeResult uniqueness_probe(const GroundState& gs, double z);
};

/// Requires L large enough that the tail falls below 1e-10 * amplitude
/// inside [0, L]; throws domain_too_small_error otherwise.
GroundState build_ground_state(const PucciParams& params,
                               const ScalarLandscape& landscape, double L,
                               double h);

}  // namespace pucci1d
