#include "pucci1d/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace pucci1d {

double select_weight_rate(const PucciParams& params, double v0, double eta0,
                          double c2) {
  if (!(c2 > 0.0)) throw validation_error("select_weight_rate: need c2 > 0");
  double cap = std::sqrt(v0 / (2.0 * params.Lambda)) / (1.0 + 0.5 * eta0);
  return 0.9 * std::min(c2, cap);
}

WeightedNorm weighted_sup_norm(const Profile& u, double rate) {
  double best = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double v = std::exp(rate * std::fabs(u.x(i))) * std::fabs(u[i]);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  return {best, arg, arg > 0 && arg + 1 < u.size()};
}

PeakCheck single_peak(const Profile& u) {
  const double scale = u.sup_norm();
  if (scale == 0.0)
    throw not_applicable_error("single_peak: profile is identically zero");
  const double eps = 1e-9 * scale;

  // significant gap signs; sub-eps gaps count as flat
  int sign_changes = 0;
  int prev_sign = 0;
  std::size_t last_pos_end = 0, first_neg_start = 0;
  bool seen_neg_after_pos = false;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    double gap = u[i + 1] - u[i];
    if (std::fabs(gap) <= eps) continue;
    int s = gap > 0 ? 1 : -1;
    if (prev_sign != 0 && s != prev_sign) {
      ++sign_changes;
      if (prev_sign > 0 && s < 0 && !seen_neg_after_pos) {
        first_neg_start = i;
        seen_neg_after_pos = true;
      }
    }
    if (s > 0) last_pos_end = i + 1;
    prev_sign = s;
  }
  std::size_t peak = u.argmax();
  if (sign_changes != 1) return {false, peak};
  // flat-top width between the last rise and the first fall
  if (seen_neg_after_pos && first_neg_start > last_pos_end &&
      (first_neg_start - last_pos_end) * u.h() > 2.0 * u.h() + 1e-15)
    return {false, peak};
  return {true, peak};
}

DecayFit decay_fit(const Profile& u, double w_lo, double w_hi) {
  const double L = u.L();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double x = u.x(i);
    if (x < w_lo * L || x > w_hi * L) continue;
    if (!(u[i] > 0.0))
      throw fit_error("decay_fit: nonpositive value inside the fit window");
    double y = std::log(u[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 4) throw fit_error("decay_fit: fewer than 4 nodes in the window");
  double denom = m * sxx - sx * sx;
  double slope = (m * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / m;
  return {std::exp(intercept), -slope};
}

std::vector<double> energy_series(const Profile& u, EnergyKind kind,
                                  const PucciParams& params,
                                  const Potential& V,
                                  const ScalarLandscape& landscape,
                                  double z) {
  const double mu = params.branch == Branch::plus ? params.Lambda
                                                  : params.lambda;
  const double vz = V.eval(z);
  const double vinf = landscape.v_inf();
  const Nonlinearity& f = landscape.f();
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    double q;
    switch (kind) {
      case EnergyKind::local_potential:
        q = V.eval(u.x(i));
        break;
      case EnergyKind::limit_potential:
        q = vinf;
        break;
      default:
        q = vz;
        break;
    }
    double up = u.d1(i);
    out[i] = 0.5 * mu * up * up + f.primitive(u[i]) - 0.5 * q * u[i] * u[i];
  }
  return out;
}

std::vector<double> energy_series(const Trajectory& tr,
                                  const ScalarLandscape& landscape) {
  std::vector<double> out(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i)
    out[i] = 0.5 * tr.du(i) * tr.du(i) + landscape.G(tr.u(i)) / tr.mu();
  return out;
}

// ---------------------------------------------------------------------------
// level pair
// ---------------------------------------------------------------------------

LevelPair locate_level_pair(const Profile& u, const Potential& V,
                            const Nonlinearity& f) {
  PeakCheck pk = single_peak(u);
  if (!pk.single)
    throw not_applicable_error("locate_level_pair: profile has several peaks");

  auto hfun = [&](double x) {
    double val = u.interp(x);
    if (!(val > 0.0)) return V.eval(x);  // f(u)/u -> 0 below the support
    return V.eval(x) - f.eval(val) / val;
  };

  // z: first sign change of h right of the peak
  double z = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = pk.index; i + 1 < u.size(); ++i) {
    double a = hfun(u.x(i)), b = hfun(u.x(i + 1));
    if (a <= 0.0 && b > 0.0) {
      double lo = u.x(i), hi = u.x(i + 1);
      for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        (hfun(mid) <= 0.0 ? lo : hi) = mid;
      }
      z = 0.5 * (lo + hi);
      break;
    }
  }
  if (!std::isfinite(z))
    throw not_applicable_error("locate_level_pair: h has no sign change");

  // y: matching height left of the peak
  double level = u.interp(z);
  double y = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = pk.index; i-- > 0;) {
    double a = u[i], b = u[i + 1];
    if (a <= level && b >= level) {
      if (b == a) {
        y = u.x(i);
        break;
      }
      double frac = (level - a) / (b - a);
      y = u.x(i) + frac * u.h();
      break;
    }
  }
  if (!std::isfinite(y))
    throw not_applicable_error(
        "locate_level_pair: matching height not reached left of the peak");
  return {y, z};
}

// ---------------------------------------------------------------------------
// nonexistence certificate
// ---------------------------------------------------------------------------

namespace {

Profile mirrored(const Profile& u) {
  std::vector<double> v(u.values().rbegin(), u.values().rend());
  return Profile(u.L(), u.h(), std::move(v), u.provenance());
}

}  // namespace

std::string Certificate::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& l : links)
    arr.push_back(
        {{"label", l.label}, {"value", l.value}, {"tol", l.tol}, {"ok", l.ok}});
  return nlohmann::json{{"chain", arr},
                        {"verdict", strict_violation ? "strict_violation"
                                                     : "consistent"},
                        {"broken_link", broken_link}}
      .dump();
}

Certificate nonexistence_certificate(const Profile& u_in, const Potential& V_in,
                                     const PucciParams& params,
                                     const ScalarLandscape& landscape) {
  // Orientation: the chain is stated for nondecreasing V; mirror the data
  // for nonincreasing V so verdicts are reflection invariant by construction.
  const double L = u_in.L();
  double trend = V_in.eval(L) - V_in.eval(-L);
  const bool mirror = trend < 0.0;
  Profile u = mirror ? mirrored(u_in) : u_in;
  Potential V = mirror ? reflect(V_in) : V_in;

  const double tol_nondec = 1e-12;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (V.derivative(u.x(i)) < -tol_nondec)
      throw not_applicable_error(
          "nonexistence_certificate: potential is not monotone");
  for (double v : u.values())
    if (v < -1e-12 * u.sup_norm())
      throw not_applicable_error(
          "nonexistence_certificate: candidate is not nonnegative");

  const Nonlinearity& f = landscape.f();
  LevelPair lp = locate_level_pair(u, V, f);
  const double vz = V.eval(lp.z);
  const double mu = params.branch == Branch::plus ? params.Lambda
                                                  : params.lambda;
  const double ratio = params.branch == Branch::plus
                           ? params.Lambda / params.lambda
                           : params.lambda / params.Lambda;

  std::vector<double> H = energy_series(u, EnergyKind::frozen_potential,
                                        params, V, landscape, lp.z);
  auto H_at = [&](double x) {
    double t = (x + L) / u.h();
    auto i = static_cast<std::size_t>(t);
    i = std::min(i, H.size() - 2);
    double frac = t - static_cast<double>(i);
    return H[i] + frac * (H[i + 1] - H[i]);
  };
  const double Hz = H_at(lp.z);
  const double Hy = H_at(lp.y);

  // tail integral of H' up to y, with the piecewise form of H' selected by
  // the sign of u'' node by node
  auto Hprime = [&](std::size_t i) {
    double x = u.x(i);
    double up = u.d1(i);
    double val = u[i];
    if (u.d2(i) >= 0.0 || val <= 0.0)
      return up * (V.eval(x) - vz) * val;
    double hx = V.eval(x) - f.eval(val) / val;
    return up * (ratio * hx * val + f.eval(val) - vz * val);
  };
  double T = 0.0;
  {
    auto last = static_cast<std::size_t>((lp.y + L) / u.h());
    last = std::min(last, u.size() - 2);
    for (std::size_t i = 0; i + 1 <= last; ++i)
      T += 0.5 * (Hprime(i) + Hprime(i + 1)) * u.h();
    double rest = lp.y - u.x(last);
    if (rest > 0.0) T += Hprime(last) * rest;
  }

  // tolerance: discretization plus the neglected tail beyond -L
  double escale = 1.0;
  for (double v : H) escale = std::max(escale, std::fabs(v));
  double c2_est = std::sqrt(landscape.v_inf() / mu);
  double tol = 10.0 * (u.h() * u.h() + std::exp(-c2_est * L)) * escale;

  Certificate cert;
  cert.links.push_back({"0 <= H(z)", Hz, tol, Hz >= -tol});
  cert.links.push_back({"H(z) <= H(y)", Hy - Hz, tol, Hy - Hz >= -tol});
  cert.links.push_back({"H(y) <= 0", Hy, tol, Hy <= tol});
  cert.links.push_back(
      {"H(y) = tail integral", Hy - T, 2.0 * tol, std::fabs(Hy - T) <= 2.0 * tol});

  cert.strict_violation = false;
  cert.broken_link.clear();
  for (const auto& l : cert.links)
    if (!l.ok) {
      cert.strict_violation = true;
      if (!cert.broken_link.empty()) cert.broken_link += "; ";
      cert.broken_link += l.label;
    }
  return cert;
}

// ---------------------------------------------------------------------------
// branch diagnostics
// ---------------------------------------------------------------------------

std::string BranchDiagnostics::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries)
    arr.push_back({{"t", e.t},
                   {"converged", e.converged},
                   {"upper_margin", e.upper_margin},
                   {"ordering_margin", e.ordering_margin},
                   {"left_slope_max", e.left_slope_max},
                   {"left_gap_max", e.left_gap_max}});
  return nlohmann::json{{"entries", arr},
                        {"worst_upper", worst_upper},
                        {"worst_ordering", worst_ordering},
                        {"worst_left_slope", worst_left_slope},
                        {"worst_left_gap", worst_left_gap}}
      .dump();
}

BranchDiagnostics branch_energy_diagnostics(const SolutionBranch& branch,
                                            const Potential& V,
                                            const PucciParams& params,
                                            const ScalarLandscape& landscape,
                                            const Bump* bump) {
  BranchDiagnostics diag;
  diag.worst_upper = std::numeric_limits<double>::infinity();
  diag.worst_ordering = std::numeric_limits<double>::infinity();
  diag.worst_left_slope = -std::numeric_limits<double>::infinity();
  diag.worst_left_gap = 0.0;

  const double vinf = landscape.v_inf();
  const Nonlinearity& f = landscape.f();
  const double ratio = params.branch == Branch::plus
                           ? params.Lambda / params.lambda
                           : params.lambda / params.Lambda;

  for (const auto& entry : branch.entries) {
    BranchEntryDiagnostics d{};
    d.t = entry.t;
    d.converged = entry.converged;
    if (!entry.converged || entry.sup_norm == 0.0) {
      d.upper_margin = d.ordering_margin = 0.0;
      d.left_slope_max = d.left_gap_max = 0.0;
      diag.entries.push_back(d);
      continue;
    }
    const Profile& u = entry.u;
    LevelPair lp = locate_level_pair(u, V, landscape.f());
    std::vector<double> E = energy_series(u, EnergyKind::limit_potential,
                                          params, V, landscape);
    auto E_at = [&](double x) {
      double t = (x + u.L()) / u.h();
      auto i = static_cast<std::size_t>(t);
      i = std::min(i, E.size() - 2);
      return E[i] + (t - static_cast<double>(i)) * (E[i + 1] - E[i]);
    };
    d.upper_margin = -E_at(lp.z);
    d.ordering_margin = E_at(lp.y) - E_at(lp.z);

    // slope of E' left of y, directly and with the equation substituted
    auto substituted_slope = [&](std::size_t i) {
      double x = u.x(i);
      double up = u.d1(i);
      double val = u[i];
      double forcing = bump != nullptr ? entry.t * bump->eval(x) : 0.0;
      if (u.d2(i) >= 0.0 || val <= 0.0)
        return up * ((V.eval(x) - vinf) * val - forcing);
      return up * (ratio * (V.eval(x) * val - f.eval(val) - forcing) +
                   f.eval(val) - vinf * val);
    };
    double worst_slope = -std::numeric_limits<double>::infinity();
    double worst_gap = 0.0;
    for (std::size_t i = 1; i + 1 < u.size() && u.x(i + 1) < lp.y; ++i) {
      double direct = (E[i + 1] - E[i - 1]) / (2.0 * u.h());
      worst_slope = std::max(worst_slope, direct);
      worst_gap = std::max(worst_gap, std::fabs(direct - substituted_slope(i)));
    }
    d.left_slope_max = worst_slope;
    d.left_gap_max = worst_gap;

    diag.worst_upper = std::min(diag.worst_upper, d.upper_margin);
    diag.worst_ordering = std::min(diag.worst_ordering, d.ordering_margin);
    diag.worst_left_slope = std::max(diag.worst_left_slope, d.left_slope_max);
    diag.worst_left_gap = std::max(diag.worst_left_gap, d.left_gap_max);
    diag.entries.push_back(d);
  }
  return diag;
}

}  // namespace pucci1d
