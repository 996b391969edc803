#include "pucci1d/bvp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include <lapacke.h>

#include "pucci1d/certify.hpp"

namespace pucci1d {

namespace {

// Tridiagonal solve via LAPACK dgtsv (partial pivoting); b holds the
// solution on return.
void solve_tridiag(std::vector<double>& dl, std::vector<double>& d,
                   std::vector<double>& du, std::vector<double>& b) {
  auto n = static_cast<lapack_int>(d.size());
  lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), d.data(),
                                  du.data(), b.data(), n);
  if (info != 0)
    throw error("tridiagonal solve failed, dgtsv info = " +
                std::to_string(info));
}

std::string fmt_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// DiscreteOperator
// ---------------------------------------------------------------------------

DiscreteOperator::DiscreteOperator(PucciParams params, Potential V,
                                   Nonlinearity f, double L, double h)
    : params_(params), V_(std::move(V)), f_(std::move(f)), L_(L), h_(h) {
  Profile probe(L, h, Provenance::constructed);
  n_ = probe.size();
  v_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    v_[i] = V_.eval(probe.x(i));
    if (!(v_[i] > 0.0))
      throw validation_error("DiscreteOperator: potential not positive on grid");
  }
}

Profile DiscreteOperator::zero_profile() const {
  return Profile(L_, h_, Provenance::solved);
}

void DiscreteOperator::check_grid(const Profile& u) const {
  if (u.size() != n_ || std::fabs(u.h() - h_) > 1e-12 ||
      std::fabs(u.L() - L_) > 1e-9)
    throw validation_error("profile grid does not match the operator grid");
}

double DiscreteOperator::residual_sup(const Profile& u, double t,
                                      const Bump* bump) const {
  check_grid(u);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n_; ++i) {
    double r = -pucci_eval(params_, u.d2(i)) + v_[i] * u[i] - f_.eval(u[i]);
    if (bump != nullptr) r -= t * bump->eval(u.x(i));
    worst = std::max(worst, std::fabs(r));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// solve_frozen (policy iteration on the slope pattern)
// ---------------------------------------------------------------------------

namespace {

// Slope of M at curvature sign `nonneg` for the given branch.
double slope_of(const PucciParams& p, bool nonneg) {
  return (nonneg == (p.branch == Branch::plus)) ? p.Lambda : p.lambda;
}

// Centered second difference of the interior vector with zero boundaries.
double d2_interior(const std::vector<double>& u, std::size_t i, double h) {
  double left = i == 0 ? 0.0 : u[i - 1];
  double right = i + 1 == u.size() ? 0.0 : u[i + 1];
  return (left - 2.0 * u[i] + right) / (h * h);
}

}  // namespace

Profile solve_frozen(const DiscreteOperator& op, const Profile& rhs) {
  op.check_grid(rhs);
  const std::size_t m = op.interior();
  const double h = op.h();
  const double ih2 = 1.0 / (h * h);
  const PucciParams& params = op.params();

  std::vector<char> nonneg(m, 1);  // tie-break: nonnegative branch
  std::vector<double> u(m, 0.0);
  std::vector<double> dl(m > 1 ? m - 1 : 0), d(m), du(m > 1 ? m - 1 : 0), b(m);

  const std::size_t max_rounds = 10 * op.size();
  std::vector<int> flip_history;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    for (std::size_t i = 0; i < m; ++i) {
      double c = slope_of(params, nonneg[i]);
      d[i] = 2.0 * c * ih2 + op.v(i + 1);
      if (i + 1 < m) du[i] = -c * ih2;
      if (i > 0) dl[i - 1] = -slope_of(params, nonneg[i]) * ih2;
      b[i] = rhs[i + 1];
    }
    solve_tridiag(dl, d, du, b);
    u = b;

    int flips = 0;
    for (std::size_t i = 0; i < m; ++i) {
      bool sign = d2_interior(u, i, h) >= 0.0;
      if (sign != static_cast<bool>(nonneg[i])) {
        nonneg[i] = sign;
        ++flips;
      }
    }
    if (flips == 0) {
      Profile out = op.zero_profile();
      for (std::size_t i = 0; i < m; ++i) out[i + 1] = u[i];
      return out;
    }
    flip_history.push_back(flips);
  }

  std::string hist;
  for (std::size_t i = flip_history.size() > 12 ? flip_history.size() - 12 : 0;
       i < flip_history.size(); ++i)
    hist += fmt_double(flip_history[i]) + " ";
  throw solver_stall_error("solve_frozen: slope pattern cycling, flips/round: " +
                           hist);
}

Profile apply_solution_map(const DiscreteOperator& op, const Profile& v,
                           double t, const Bump& bump) {
  op.check_grid(v);
  Profile rhs = op.zero_profile();
  for (std::size_t i = 0; i < op.size(); ++i)
    rhs[i] = op.f().eval(v[i]) + t * bump.eval(rhs.x(i));
  return solve_frozen(op, rhs);
}

// ---------------------------------------------------------------------------
// solve_full (damped semismooth Newton)
// ---------------------------------------------------------------------------

std::pair<Profile, SolveInfo> solve_full(const DiscreteOperator& op, double t,
                                         const Profile& init,
                                         const Bump& bump) {
  op.check_grid(init);
  const std::size_t m = op.interior();
  const double h = op.h();
  const double ih2 = 1.0 / (h * h);
  const PucciParams& params = op.params();
  const Nonlinearity& f = op.f();

  std::vector<double> forcing(m);
  {
    Profile probe = op.zero_profile();
    for (std::size_t i = 0; i < m; ++i)
      forcing[i] = t * bump.eval(probe.x(i + 1));
  }

  std::vector<double> u(m);
  for (std::size_t i = 0; i < m; ++i) u[i] = init[i + 1];

  auto residual = [&](const std::vector<double>& w, std::vector<double>& r) {
    double sup = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double d2 = d2_interior(w, i, h);
      r[i] = -pucci_eval(params, d2) + op.v(i + 1) * w[i] - f.eval(w[i]) -
             forcing[i];
      sup = std::max(sup, std::fabs(r[i]));
    }
    return sup;
  };

  std::vector<double> r(m), r_trial(m), trial(m), delta(m);
  std::vector<double> dl(m > 1 ? m - 1 : 0), d(m), du(m > 1 ? m - 1 : 0);

  double res = residual(u, r);
  const int max_outer = 200;
  int iter = 0;
  bool rejected = false;
  // polish to the roundoff floor; convergence is judged on the final residual
  for (; iter < max_outer && res > 1e-12; ++iter) {
    // Jacobian with the slope pattern frozen from the current iterate
    for (std::size_t i = 0; i < m; ++i) {
      double c = slope_of(params, d2_interior(u, i, h) >= 0.0);
      d[i] = 2.0 * c * ih2 + op.v(i + 1) - f.derivative(u[i]);
      if (i + 1 < m) du[i] = -c * ih2;
      if (i > 0) dl[i - 1] = -c * ih2;
    }
    delta = r;
    solve_tridiag(dl, d, du, delta);

    // Armijo backtracking on the residual sup norm
    double step = 1.0;
    bool accepted = false;
    for (int back = 0; back < 30; ++back) {
      for (std::size_t i = 0; i < m; ++i) trial[i] = u[i] - step * delta[i];
      double res_trial = residual(trial, r_trial);
      if (std::isfinite(res_trial) &&
          res_trial <= (1.0 - 1e-4 * step) * res) {
        u = trial;
        r = r_trial;
        res = res_trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      rejected = true;
      break;
    }
  }

  Profile out = op.zero_profile();
  for (std::size_t i = 0; i < m; ++i) out[i + 1] = u[i];
  double sup_u = out.sup_norm();
  bool ok = res <= 1e-10 * (1.0 + sup_u);
  std::string msg = ok ? "converged"
                    : rejected
                        ? "step rejected 30 times at residual " +
                              fmt_double(res)
                        : "iteration limit at residual " + fmt_double(res);
  return {std::move(out), SolveInfo{ok, res, iter, msg}};
}

// ---------------------------------------------------------------------------
// continuation
// ---------------------------------------------------------------------------

double SolutionBranch::max_sup_norm() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.sup_norm);
  return m;
}

void SolutionBranch::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw error("cannot open " + path + " for writing");
  out << "t,sup_norm,x_norm,residual,converged\n";
  for (const auto& e : entries)
    out << fmt_double(e.t) << ',' << fmt_double(e.sup_norm) << ','
        << fmt_double(e.x_norm) << ',' << fmt_double(e.residual) << ','
        << (e.converged ? 1 : 0) << '\n';
}

SolutionBranch continuation(const DiscreteOperator& op,
                            const std::vector<double>& t_values,
                            const Profile& init, const Bump& bump,
                            double weight_rate) {
  if (t_values.empty())
    throw validation_error("continuation: empty forcing ladder");
  for (std::size_t i = 1; i < t_values.size(); ++i)
    if (!(t_values[i] < t_values[i - 1]))
      throw validation_error("continuation: ladder must strictly decrease");
  if (t_values.back() < 0.0)
    throw validation_error("continuation: ladder must end at t >= 0");

  SolutionBranch branch;
  Profile warm = init;  // last converged solution; unsolvable levels are
                        // recorded but do not poison later warm starts
  for (double t : t_values) {
    auto [u, info] = solve_full(op, t, warm, bump);
    double xn = weighted_sup_norm(u, weight_rate).value;
    double sup = u.sup_norm();
    if (info.converged) warm = u;
    branch.entries.push_back(
        BranchEntry{t, std::move(u), info.residual, sup, xn, info.converged});
  }
  return branch;
}

bool comparison_holds(const DiscreteOperator& op, const Profile& rhs1,
                      const Profile& rhs2) {
  Profile u1 = solve_frozen(op, rhs1);
  Profile u2 = solve_frozen(op, rhs2);
  double slack = 1e-10 * (1.0 + u2.sup_norm());
  for (std::size_t i = 0; i < u1.size(); ++i)
    if (u1[i] > u2[i] + slack) return false;
  return true;
}

}  // namespace pucci1d
