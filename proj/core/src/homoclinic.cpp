#include "pucci1d/homoclinic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "pucci1d/certify.hpp"

namespace pucci1d {

namespace {

using ld = long double;

constexpr int kSubsteps = 8;

struct State {
  ld u, p;
};

// One classical RK4 step of (u, u') with u'' = accel(u).
template <class A>
State rk4_step(const A& accel, State s, ld h) {
  auto f = [&](State q) { return State{q.p, accel(q.u)}; };
  State k1 = f(s);
  State k2 = f({s.u + 0.5L * h * k1.u, s.p + 0.5L * h * k1.p});
  State k3 = f({s.u + 0.5L * h * k2.u, s.p + 0.5L * h * k2.p});
  State k4 = f({s.u + h * k3.u, s.p + h * k3.p});
  return {s.u + h / 6.0L * (k1.u + 2.0L * k2.u + 2.0L * k3.u + k4.u),
          s.p + h / 6.0L * (k1.p + 2.0L * k2.p + 2.0L * k3.p + k4.p)};
}

// Advance by dx (either sign) in kSubsteps equal RK4 steps.
template <class A>
State advance(const A& accel, State s, ld dx) {
  ld hs = dx / kSubsteps;
  for (int i = 0; i < kSubsteps; ++i) s = rk4_step(accel, s, hs);
  return s;
}

// Locate phi = 0 inside the step [0, dx] from s0, given a sign change of phi
// between the endpoints. Returns the offset; bisection to 1e-13 absolute.
template <class A, class Phi>
ld refine_event(const A& accel, State s0, ld dx, const Phi& phi) {
  ld lo = 0.0L, hi = dx;
  ld flo = phi(s0);
  for (int i = 0; i < 100; ++i) {
    ld mid = 0.5L * (lo + hi);
    if (fabsl(hi - lo) < 1e-13L) break;
    ld fm = phi(advance(accel, s0, mid));
    if (fm == 0.0L) return mid;
    if ((fm < 0.0L) == (flo < 0.0L))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5L * (lo + hi);
}

void check_finite(const State& s, double x) {
  if (!std::isfinite(static_cast<double>(s.u)) ||
      !std::isfinite(static_cast<double>(s.p))) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), x);
    throw integration_error(std::string("integration blow-up near x = ") +
                            std::string(buf, r.ptr));
  }
}

// Secant polish of a root to extended precision, starting from a double-
// accurate value. Keeps the glue data on matching orbits so re-integration
// does not pick up a spurious energy offset.
template <class F>
ld refine_root_ld(const F& phi, ld x0) {
  ld x1 = x0 * (1.0L + 1e-9L) + (x0 == 0.0L ? 1e-12L : 0.0L);
  ld f0 = phi(x0), f1 = phi(x1);
  for (int i = 0; i < 60; ++i) {
    if (f1 == f0) break;
    ld x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(static_cast<double>(x2))) break;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = phi(x1);
    if (fabsl(x1 - x0) <= 1e-18L * fmaxl(1.0L, fabsl(x1))) break;
  }
  return x1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Trajectory
// ---------------------------------------------------------------------------

const TrajectoryEvent* Trajectory::first_event(EventKind kind) const {
  for (const auto& ev : events_)
    if (ev.kind == kind) return &ev;
  return nullptr;
}

Trajectory integrate_ivp(const ScalarLandscape& landscape, double mu,
                         double alpha, double x_max, double h) {
  if (!(alpha > 0.0)) throw validation_error("integrate_ivp: need alpha > 0");
  if (!(h > 0.0) || !(x_max >= h))
    throw validation_error("integrate_ivp: need 0 < h <= x_max");
  if (!(mu > 0.0)) throw validation_error("integrate_ivp: need mu > 0");

  const ld vinf = landscape.v_inf();
  const Nonlinearity& f = landscape.f();
  auto accel = [&](ld u) { return -(f.eval_ld(u) - vinf * u) / (ld)mu; };

  Trajectory tr;
  tr.mu_ = mu;
  tr.alpha_ = alpha;
  tr.h_ = h;

  const double center = landscape.center();
  auto n = static_cast<std::size_t>(std::llround(x_max / h));
  State s{static_cast<ld>(alpha), 0.0L};
  tr.u_.push_back(alpha);
  tr.du_.push_back(0.0);

  auto record_event = [&](EventKind kind, double x0, State s0, auto&& phi) {
    ld off = refine_event(accel, s0, (ld)h, phi);
    State se = advance(accel, s0, off);
    tr.events_.push_back({kind, x0 + static_cast<double>(off),
                          static_cast<double>(se.u),
                          static_cast<double>(se.p)});
  };

  for (std::size_t i = 1; i <= n; ++i) {
    State prev = s;
    double x_prev = static_cast<double>(i - 1) * h;
    s = advance(accel, s, (ld)h);
    check_finite(s, static_cast<double>(i) * h);

    auto crossed = [&](ld a, ld b) { return a * b < 0.0L; };
    if (crossed(prev.u - (ld)center, s.u - (ld)center))
      record_event(EventKind::hits_center, x_prev, prev,
                   [&](const State& q) { return q.u - (ld)center; });
    if (crossed(prev.p, s.p))
      record_event(EventKind::derivative_zero, x_prev, prev,
                   [&](const State& q) { return q.p; });
    if (crossed(prev.u, s.u) || s.u == 0.0L) {
      record_event(EventKind::hits_zero, x_prev, prev,
                   [&](const State& q) { return q.u; });
      break;
    }
    tr.u_.push_back(static_cast<double>(s.u));
    tr.du_.push_back(static_cast<double>(s.p));
  }
  return tr;
}

OrbitClass classify_amplitude(const ScalarLandscape& landscape, double alpha) {
  if (!(alpha > 0.0))
    throw validation_error("classify_amplitude: need alpha > 0");
  const double a0 = landscape.homoclinic_amplitude();
  const double tol = 1e-9 * a0;
  if (std::fabs(alpha - landscape.center()) <= tol)
    throw equilibrium_error("classify_amplitude: alpha at the center");
  if (std::fabs(alpha - a0) <= tol) return OrbitClass::Homoclinic;
  // cross-check amplitude ordering against the energy sign
  bool above = alpha > a0;
  bool positive_energy = landscape.G(alpha) > 0.0;
  if (above != positive_energy) {
    // only possible within rounding of the amplitude; treat as homoclinic
    return OrbitClass::Homoclinic;
  }
  return above ? OrbitClass::Crossing : OrbitClass::Periodic;
}

// ---------------------------------------------------------------------------
// GroundState
// ---------------------------------------------------------------------------

GroundState build_ground_state(const PucciParams& params,
                               const ScalarLandscape& landscape, double L,
                               double h) {
  Profile grid(L, h, Provenance::constructed);
  const std::size_t half = grid.center_index();

  const MatchingLevels levels = matching_levels(params, landscape);
  const double a0 = landscape.homoclinic_amplitude();
  const bool plus = params.branch == Branch::plus;
  const double mu_core = plus ? params.lambda : params.Lambda;
  const double mu_tail = plus ? params.Lambda : params.lambda;

  const Nonlinearity& f = landscape.f();
  const ld vinf = landscape.v_inf();
  auto g_ld = [&](ld s) { return f.eval_ld(s) - vinf * s; };
  auto G_ld = [&](ld s) {
    return f.primitive_ld(s) - 0.5L * vinf * s * s;
  };

  // Extended-precision glue data: the core amplitude must sit on the level
  // set to ~1e-19, otherwise the two orbit pieces carry a relative energy
  // offset that forward re-integration amplifies through the far tail.
  const ld center = refine_root_ld(g_ld, (ld)landscape.center());
  ld amp_ld;
  if (params.degenerate()) {
    amp_ld = refine_root_ld(G_ld, (ld)a0);
  } else {
    const ld level = (plus ? (1.0L - (ld)params.lambda / (ld)params.Lambda)
                           : (1.0L - (ld)params.Lambda / (ld)params.lambda)) *
                     G_ld(center);
    amp_ld = refine_root_ld([&](ld s) { return G_ld(s) - level; },
                            (ld)(plus ? levels.plus_amplitude
                                      : levels.minus_amplitude));
  }
  auto accel_core = [&](ld u) { return -g_ld(u) / (ld)mu_core; };
  auto accel_tail = [&](ld u) { return -g_ld(u) / (ld)mu_tail; };

  std::vector<double> u(grid.size(), 0.0), du(grid.size(), 0.0);
  std::vector<ld> uld(grid.size(), 0.0L), duld(grid.size(), 0.0L);
  auto put = [&](std::size_t idx, State st) {
    u[idx] = static_cast<double>(st.u);
    du[idx] = static_cast<double>(st.p);
    uld[idx] = st.u;
    duld[idx] = st.p;
  };

  // Core: march the core slope from (amp, 0) until u crosses the center
  // height; the crossing is the glue point y1.
  put(half, {amp_ld, 0.0L});
  State s{amp_ld, 0.0L};
  double y1 = -1.0;
  State core_glue{0.0L, 0.0L};
  for (std::size_t j = 1; j <= half; ++j) {
    State prev = s;
    s = advance(accel_core, s, (ld)h);
    check_finite(s, j * h);
    if (prev.u > center && s.u <= center) {
      ld off = refine_event(accel_core, prev, (ld)h,
                            [&](const State& q) { return q.u - center; });
      y1 = (j - 1) * h + static_cast<double>(off);
      core_glue = advance(accel_core, prev, off);
      break;
    }
    put(half + j, s);
  }
  if (y1 < 0.0)
    throw domain_too_small_error(
        "build_ground_state: core never reaches the glue height within L");

  // Tail, pass 1: measure the backward span from a far-field zero-energy
  // seed up to the center height. The seed slope comes from the orbit's
  // energy identity, so the state is on the homoclinic to O(eps).
  const double delta = 1e-10 * a0;
  auto seed_state = [&]() {
    return State{(ld)delta, -sqrtl(-2.0L * G_ld((ld)delta) / (ld)mu_tail)};
  };
  double span = -1.0;
  State tail_glue{0.0L, 0.0L};
  {
    State q = seed_state();
    const std::size_t max_steps = 4 * grid.size() + 16;
    for (std::size_t k = 1; k <= max_steps; ++k) {
      State prev = q;
      q = advance(accel_tail, q, -(ld)h);
      check_finite(q, -static_cast<double>(k) * h);
      if (prev.u < center && q.u >= center) {
        ld off = refine_event(accel_tail, prev, -(ld)h,
                              [&](const State& w) { return w.u - center; });
        span = (k - 1) * h + static_cast<double>(-off);
        tail_glue = advance(accel_tail, prev, off);
        break;
      }
    }
  }
  if (span < 0.0)
    throw integration_error(
        "build_ground_state: backward tail never reaches the glue height");

  const double x_seed = y1 + span;
  if (x_seed > L)
    throw domain_too_small_error(
        "build_ground_state: tail does not decay below 1e-10 * amplitude "
        "within L");

  // Tail, pass 2: walk the seed state onto the grid nodes, backward to the
  // first node right of y1. Nodes beyond the seed (amplitudes under
  // 1e-10 * amplitude) get the exact exponential of the linearized far
  // field, which keeps the sub-resolution tail positive at any L.
  {
    auto j_lo = static_cast<std::size_t>(std::floor(y1 / h)) + 1;
    auto j_seed = static_cast<std::size_t>(std::floor(x_seed / h));
    j_seed = std::min(j_seed, half);
    if (j_seed >= j_lo) {
      State q = seed_state();
      double xq = x_seed;
      for (std::size_t j = j_seed;; --j) {
        double target = j * h;
        q = advance(accel_tail, q, (ld)(target - xq));
        xq = target;
        put(half + j, q);
        if (j == j_lo) break;
      }
    }
    const ld rate = sqrtl(vinf / (ld)mu_tail);
    for (std::size_t j = j_seed + 1; j <= half; ++j) {
      ld v = (ld)delta * expl(-rate * ((ld)(j * h) - (ld)x_seed));
      put(half + j, {v, -rate * v});
    }
  }

  // Mirror onto x < 0.
  for (std::size_t j = 1; j <= half; ++j) {
    u[half - j] = u[half + j];
    du[half - j] = -du[half + j];
    uld[half - j] = uld[half + j];
    duld[half - j] = -duld[half + j];
  }

  GroundState gs(params, landscape,
                 Profile(L, h, std::move(u), Provenance::constructed));
  gs.du_ = std::move(du);
  gs.uld_ = std::move(uld);
  gs.duld_ = std::move(duld);
  gs.levels_ = levels;
  gs.y1_ = y1;
  gs.glue_d1_ = std::fabs(static_cast<double>(core_glue.p - tail_glue.p));
  gs.glue_d2_ = std::fabs(
      static_cast<double>(accel_core(core_glue.u) - accel_tail(tail_glue.u)));

  DecayFit fit = decay_fit(gs.u_, 0.7, 0.95);
  gs.c1_ = fit.c1;
  gs.c2_ = fit.c2;
  return gs;
}

double GroundState::residual_sup() const {
  const double h = u_.h();
  const double vinf = landscape_.v_inf();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < u_.size(); ++i) {
    double ax = std::fabs(u_.x(i));
    if (std::fabs(ax - y1_) <= 2.0 * h) continue;
    double r = -pucci_eval(params_, u_.d2(i)) + vinf * u_[i] -
               landscape_.f().eval(u_[i]);
    worst = std::max(worst, std::fabs(r));
  }
  return worst;
}

double GroundState::glue_residual() const {
  const double h = u_.h();
  const double vinf = landscape_.v_inf();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < u_.size(); ++i) {
    double ax = std::fabs(u_.x(i));
    if (std::fabs(ax - y1_) > 2.0 * h) continue;
    double r = -pucci_eval(params_, u_.d2(i)) + vinf * u_[i] -
               landscape_.f().eval(u_[i]);
    worst = std::max(worst, std::fabs(r));
  }
  return worst;
}

Profile GroundState::restricted(double newL) const {
  if (newL > u_.L() + 1e-12)
    throw validation_error("GroundState::restricted: newL exceeds L");
  Profile out(newL, u_.h(), Provenance::constructed);
  std::size_t offset = u_.center_index() - out.center_index();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = u_[offset + i];
  return out;
}

void GroundState::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw error("cannot open " + path + " for writing");
  auto fmt = [](double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
  };
  out << "x,u,up,upp\n";
  for (std::size_t i = 0; i < u_.size(); ++i) {
    double upp = pucci_inverse(
        params_, -(landscape_.f().eval(u_[i]) - landscape_.v_inf() * u_[i]));
    out << fmt(u_.x(i)) << ',' << fmt(u_[i]) << ',' << fmt(du_[i]) << ','
        << fmt(upp) << '\n';
  }
}

std::string GroundState::to_json() const {
  nlohmann::json j{
      {"branch", params_.branch == Branch::plus ? "plus" : "minus"},
      {"y1", y1_},
      {"z", y1_},
      {"max", max_value()},
      {"c1", c1_},
      {"c2", c2_},
      {"levels",
       {{"low", levels_.low},
        {"plus_amplitude", levels_.plus_amplitude},
        {"minus_amplitude", levels_.minus_amplitude}}},
      {"glue", {{"d1_gap", glue_d1_}, {"d2_gap", glue_d2_}}},
      {"L", u_.L()},
      {"h", u_.h()}};
  return j.dump();
}

// ---------------------------------------------------------------------------
// uniqueness probe
// ---------------------------------------------------------------------------

ProbeResult uniqueness_probe(const GroundState& gs, double z) {
  const Profile& u = gs.profile();
  const double h = u.h();
  auto k = static_cast<std::size_t>(std::llround((z + u.L()) / h));
  if (k == 0 || k + 1 >= u.size())
    throw validation_error("uniqueness_probe: z must be in the grid interior");

  const PucciParams& params = gs.params();
  const ScalarLandscape& ls = gs.landscape();
  const Nonlinearity& f = ls.f();
  const ld vinf = ls.v_inf();
  const ld center = ls.center();
  const bool plus = params.branch == Branch::plus;
  const ld slope_above = plus ? params.lambda : params.Lambda;
  const ld slope_below = plus ? params.Lambda : params.lambda;
  // u'' = (M)^{-1}(-g(u)): -g < 0 above the center, > 0 below it
  auto accel = [&](ld q) {
    ld mg = -(f.eval_ld(q) - vinf * q);
    return mg / (mg >= 0.0L ? slope_below : slope_above);
  };

  // Advance splitting each substep at center crossings, where the
  // right-hand side has a slope kink.
  auto advance_split = [&](State s, ld dx) {
    ld hs = dx / kSubsteps;
    for (int i = 0; i < kSubsteps; ++i) {
      State nxt = rk4_step(accel, s, hs);
      if ((s.u - center) * (nxt.u - center) < 0.0L) {
        ld lo = 0.0L, hi = hs;
        ld flo = s.u - center;
        for (int it = 0; it < 80; ++it) {
          ld mid = 0.5L * (lo + hi);
          State sm = rk4_step(accel, s, mid);
          ld fm = sm.u - center;
          if (fm == 0.0L) {
            lo = hi = mid;
            break;
          }
          if ((fm < 0.0L) == (flo < 0.0L))
            lo = mid;
          else
            hi = mid;
          if (fabsl(hi - lo) < 1e-15L) break;
        }
        ld split = 0.5L * (lo + hi);
        State sc = rk4_step(accel, s, split);
        nxt = rk4_step(accel, sc, hs - split);
      }
      s = nxt;
    }
    return s;
  };

  State start{gs.uld_[k], gs.duld_[k]};
  double sup = 0.0;
  State s = start;
  for (std::size_t i = k + 1; i < u.size(); ++i) {
    s = advance_split(s, (ld)h);
    check_finite(s, u.x(i));
    sup = std::max(sup, std::fabs(static_cast<double>(s.u) - u[i]));
  }
  s = start;
  for (std::size_t i = k; i-- > 0;) {
    s = advance_split(s, -(ld)h);
    check_finite(s, u.x(i));
    sup = std::max(sup, std::fabs(static_cast<double>(s.u) - u[i]));
  }

  bool low = std::fabs(u[k]) < 1e-6 * u.sup_norm();
  return {sup, low};
}

}  // namespace pucci1d
