#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pucci1d/model.hpp"
#include "pucci1d/scalar.hpp"

namespace pucci1d {

/// Finite-difference realization of u |-> -M(D2 u) + V(x) u on the uniform
/// grid over [-L, L] with homogeneous Dirichlet data, D2 the centered second
/// difference. Zero boundary data plus nonnegative right-hand sides give
/// nonnegative solutions (discrete maximum principle). Immutable after
/// assembly; one solve is single-threaded, distinct solves are independent.
class DiscreteOperator {
 public:
  DiscreteOperator(PucciParams params, Potential V, Nonlinearity f, double L,
                   double h);

  double L() const { return L_; }
  double h() const { return h_; }
  std::size_t size() const { return n_; }        // total nodes
  std::size_t interior() const { return n_ - 2; }
  double x(std::size_t i) const {
    return (static_cast<double>(i) - 0.5 * static_cast<double>(n_ - 1)) * h_;
  }
  double v(std::size_t i) const { return v_[i]; }
  const PucciParams& params() const { return params_; }
  const Potential& potential() const { return V_; }
  const Nonlinearity& f() const { return f_; }

  Profile zero_profile() const;
  void check_grid(const Profile& u) const;

  /// Sup norm of -M(D2 u) + V u - f(u) - t * bump over interior nodes.
  double residual_sup(const Profile& u, double t, const Bump* bump) const;

 private:
  PucciParams params_;
  Potential V_;
  Nonlinearity f_;
  double L_, h_;
  std::size_t n_;
  std::vector<double> v_;
};

/// Solves -M(D2 u) + V u = rhs by sign-pattern (policy) iteration: freeze the
/// slope of M per node from the sign of D2 u, solve the resulting tridiagonal
/// system, recompute the signs, repeat until the pattern is stable. Ties at
/// D2 u = 0 take the slope of the nonnegative branch. Throws
/// solver_stall_error (with the flip history) if the pattern cycles beyond
/// 10 * node count rounds. The solution obeys sup|u| <= sup|rhs| / V0.
Profile solve_frozen(const DiscreteOperator& op, const Profile& rhs);

/// One application of the fixed-point map: solve_frozen with
/// rhs = f(v) + t * bump. Nonzero fixed points at t = 0 are solutions of the
/// truncated problem.
Profile apply_solution_map(const DiscreteOperator& op, const Profile& v,
                           double t, const Bump& bump);

struct SolveInfo {
  bool converged;
  double residual;
  int iterations;
  std::string message;
};

/// Damped Newton on the discrete residual with the extremal-operator slope
/// pattern frozen per outer iteration and Armijo backtracking (factor 0.5)
/// on the residual sup norm. Convergence: residual <= 1e-10 (1 + sup|u|).
/// Divergence is reported in SolveInfo with the last iterate, not thrown.
std::pair<Profile, SolveInfo> solve_full(const DiscreteOperator& op, double t,
                                         const Profile& init,
                                         const Bump& bump);

struct BranchEntry {
  double t;
  Profile u;
  double residual;
  double sup_norm;
  double x_norm;
  bool converged;
};

/// Solutions along a descending forcing ladder, each warm-started from the
/// previous level.
struct SolutionBranch {
  std::vector<BranchEntry> entries;

  double max_sup_norm() const;
  /// CSV with header t,sup_norm,x_norm,residual,converged.
  void save_csv(const std::string& path) const;
};

/// t_values strictly decreasing, ending at >= 0; weight_rate is the rate of
/// the exponentially weighted norm recorded per entry.
SolutionBranch continuation(const DiscreteOperator& op,
                            const std::vector<double>& t_values,
                            const Profile& init, const Bump& bump,
                            double weight_rate);

/// Whether solve_frozen(rhs1) <= solve_frozen(rhs2) pointwise (up to solver
/// roundoff) for rhs1 <= rhs2. Always true unless the discretization is at
/// fault.
bool comparison_holds(const DiscreteOperator& op, const Profile& rhs1,
                      const Profile& rhs2);

}  // namespace pucci1d
