#pragma once

#include <string>
#include <vector>

#include "pucci1d/bvp.hpp"
#include "pucci1d/homoclinic.hpp"
#include "pucci1d/model.hpp"
#include "pucci1d/scalar.hpp"

namespace pucci1d {

/// Rate of the exponentially weighted sup norm: the largest value (with a
/// 0.9 margin) satisfying both rate < c2 and
/// Lambda rate^2 (1 + eta0/2)^2 < V0 / 2.
double select_weight_rate(const PucciParams& params, double v0, double eta0,
                          double c2);

struct WeightedNorm {
  double value;
  std::size_t argmax_index;
  bool interior;  // max attained away from the grid ends
};
/// max over the grid of exp(rate |x|) |u(x)|.
WeightedNorm weighted_sup_norm(const Profile& u, double rate);

struct PeakCheck {
  bool single;
  std::size_t index;
};
/// True iff the discrete derivative changes sign exactly once, up to a flat
/// top of width <= 2h; gaps below 1e-9 of the sup norm do not count.
/// Throws not_applicable_error on an identically zero profile.
PeakCheck single_peak(const Profile& u);

struct DecayFit {
  double c1, c2;
};
/// Least-squares line on (x, log u) over |x| in [w_lo L, w_hi L], x > 0;
/// returns exp(intercept) and -slope. Throws fit_error on nonpositive data.
DecayFit decay_fit(const Profile& u, double w_lo = 0.7, double w_hi = 0.95);

/// Energy densities along a profile; the derivative term carries Lambda/2 on
/// the plus branch and lambda/2 on the minus branch.
///   local_potential:  mu/2 u'^2 + F(u) - V(x)/2 u^2
///   limit_potential:  mu/2 u'^2 + F(u) - v_inf/2 u^2
///   frozen_potential: mu/2 u'^2 + F(u) - V(z)/2 u^2   (z supplied)
enum class EnergyKind { local_potential, limit_potential, frozen_potential };

std::vector<double> energy_series(const Profile& u, EnergyKind kind,
                                  const PucciParams& params,
                                  const Potential& V,
                                  const ScalarLandscape& landscape,
                                  double z = 0.0);

/// Conserved phase-plane energy u'^2/2 + G(u)/mu along a trajectory, using
/// the stored derivative samples.
std::vector<double> energy_series(const Trajectory& tr,
                                  const ScalarLandscape& landscape);

struct LevelPair {
  double y;  // left of the peak, u(y) = u(z)
  double z;  // right of the peak, where V(z) = f(u(z))/u(z)
};
/// Locates the curvature-sign switch right of the peak (the zero of
/// h(x) = V(x) - f(u)/u) and the matching height on the left, by bisection
/// between grid nodes. Throws not_applicable_error when h has no sign change.
LevelPair locate_level_pair(const Profile& u, const Potential& V,
                            const Nonlinearity& f);

struct ChainLink {
  std::string label;
  double value;
  double tol;
  bool ok;
};

/// Certificate for the monotone-potential obstruction chain
///   0 <= H(z) <= H(y) <= 0  (with H(y) matching the tail integral of H').
/// strict_violation means some link fails beyond its tolerance, certifying
/// that the candidate cannot be a solution of the whole-line problem.
struct Certificate {
  std::vector<ChainLink> links;
  bool strict_violation;
  std::string broken_link;

  std::string to_json() const;
};

/// Requires V nondecreasing (or nonincreasing: the chain is evaluated on the
/// mirrored data, so verdicts are reflection invariant) or constant, and a
/// positive single-peak candidate; throws not_applicable_error otherwise.
Certificate nonexistence_certificate(const Profile& u, const Potential& V,
                                     const PucciParams& params,
                                     const ScalarLandscape& landscape);

struct BranchEntryDiagnostics {
  double t;
  bool converged;
  double upper_margin;      // -E(z), >= 0 for true solutions
  double ordering_margin;   // E(y) - E(z), >= 0 for true solutions
  double left_slope_max;    // max of E' left of y, <= 0 for true solutions
  // max gap left of y between the direct slope of E and its form with the
  // equation substituted; ~0 for true solutions, nonzero for corrupted
  // profiles (a pure translation leaves every direct check invariant)
  double left_gap_max;
};

struct BranchDiagnostics {
  std::vector<BranchEntryDiagnostics> entries;
  double worst_upper;
  double worst_ordering;
  double worst_left_slope;
  double worst_left_gap;

  std::string to_json() const;
};

/// Per-entry limit-potential energy diagnostics along a continuation branch:
/// the sign of -E(z), the ordering E(z) <= E(y) and the one-sided
/// monotonicity of E left of y. Reports worst margins across the branch.
/// bump (with each entry's forcing level) enters the substituted slope; pass
/// the one the branch was computed with whenever the ladder is forced.
BranchDiagnostics branch_energy_diagnostics(const SolutionBranch& branch,
                                            const Potential& V,
                                            const PucciParams& params,
                                            const ScalarLandscape& landscape,
                                            const Bump* bump = nullptr);

}  // namespace pucci1d
