#include "pucci1d/scalar.hpp"

#include <cmath>
#include <functional>

#include <json.hpp>

namespace pucci1d {

double pucci_eval(const PucciParams& params, double m) {
  bool nonneg = m >= 0.0;
  bool plus = params.branch == Branch::plus;
  return (nonneg == plus ? params.Lambda : params.lambda) * m;
}

double pucci_inverse(const PucciParams& params, double m) {
  bool nonneg = m >= 0.0;
  bool plus = params.branch == Branch::plus;
  return m / (nonneg == plus ? params.Lambda : params.lambda);
}

namespace {

// Bracket a sign change of phi by geometric expansion from s = 1 (factor 2,
// at most 60 doublings each way), then bisect to 1e-12 relative width.
double bracketed_root(const std::function<double(double)>& phi,
                      const char* what) {
  double lo = 1.0, hi = 1.0;
  double flo = phi(lo), fhi = flo;
  bool found = false;
  for (int i = 0; i < 60 && !found; ++i) {
    if (flo > 0.0) {
      lo *= 0.5;
      flo = phi(lo);
    }
    if (fhi < 0.0) {
      hi *= 2.0;
      fhi = phi(hi);
    }
    found = flo <= 0.0 && fhi >= 0.0;
  }
  if (!found)
    throw landscape_error(std::string("no sign change found for ") + what);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-12 * std::max(1.0, mid)) break;
    double fm = phi(mid);
    if (fm == 0.0) return mid;
    (fm < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Root of phi on [lo, hi] with phi(lo), phi(hi) of opposite sign.
double bisect(const std::function<double(double)>& phi, double lo, double hi,
              const char* what) {
  double flo = phi(lo), fhi = phi(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw landscape_error(std::string("bracket failure for ") + what);
  bool increasing = flo < 0.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-13 * std::max(1.0, std::fabs(mid))) break;
    double fm = phi(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == increasing)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double find_center(const Nonlinearity& f, double v_inf) {
  if (!(v_inf > 0.0))
    throw landscape_error("find_center: need v_inf > 0");
  return bracketed_root([&](double s) { return f.eval(s) / s - v_inf; },
                        "f(s)/s = v_inf");
}

double find_homoclinic_amplitude(const ScalarLandscape& landscape) {
  double c = landscape.center();
  double hi = 2.0 * c;
  double v = landscape.G(hi);
  int i = 0;
  while (v < 0.0 && i++ < 60) {
    hi *= 2.0;
    v = landscape.G(hi);
  }
  if (v < 0.0)
    throw landscape_error("find_homoclinic_amplitude: G stays negative");
  return bisect([&](double s) { return landscape.G(s); }, c, hi,
                "G(s) = 0 above the center");
}

ScalarLandscape::ScalarLandscape(Nonlinearity f, double v_inf)
    : f_(std::move(f)), v_inf_(v_inf) {
  center_ = find_center(f_, v_inf_);
  g_min_ = G(center_);
  // temporary amplitude so find_homoclinic_amplitude can run on *this
  amplitude_ = center_;
  amplitude_ = find_homoclinic_amplitude(*this);
}

std::string ScalarLandscape::to_json() const {
  return nlohmann::json{{"v_inf", v_inf_},
                        {"center", center_},
                        {"homoclinic_amplitude", amplitude_},
                        {"g_min", g_min_}}
      .dump();
}

MatchingLevels matching_levels(const PucciParams& params,
                               const ScalarLandscape& landscape) {
  double c = landscape.center();
  double a0 = landscape.homoclinic_amplitude();
  if (params.degenerate()) return {c, c, a0};

  // plus branch: level (1 - lambda/Lambda) G(center) in (G(center), 0)
  double level_p = (1.0 - params.lambda / params.Lambda) * landscape.g_min();
  double low = bisect([&](double s) { return landscape.G(s) - level_p; },
                      1e-300, c, "lower matching level");
  double plus = bisect([&](double s) { return landscape.G(s) - level_p; }, c,
                       a0, "plus core amplitude");

  // minus branch: level (1 - Lambda/lambda) G(center) > 0, single root
  // above the homoclinic amplitude
  double level_m = (1.0 - params.Lambda / params.lambda) * landscape.g_min();
  double hi = 2.0 * a0;
  int i = 0;
  while (landscape.G(hi) < level_m && i++ < 60) hi *= 2.0;
  if (landscape.G(hi) < level_m)
    throw landscape_error("matching_levels: minus level unreachable");
  double minus = bisect([&](double s) { return landscape.G(s) - level_m; }, a0,
                        hi, "minus core amplitude");
  return {low, plus, minus};
}

double solution_sup_floor(const Nonlinearity& f, double v0) {
  if (!(v0 > 0.0)) throw landscape_error("solution_sup_floor: need v0 > 0");
  return bracketed_root([&](double s) { return f.eval(s) / s - v0; },
                        "f(s)/s = v0");
}

ForcingThreshold forcing_threshold(const Nonlinearity& f, double v_inf) {
  if (v_inf <= 0.0) return {0.0, 0.0};  // g = f >= 0, nothing to offset
  double c = find_center(f, v_inf);
  auto g = [&](double s) { return f.eval(s) - v_inf * s; };

  // coarse scan of [0, center], then golden-section refinement
  const int n = 256;
  double best_s = 0.0, best = 0.0;
  for (int i = 0; i <= n; ++i) {
    double s = c * i / n;
    double v = g(s);
    if (v < best) {
      best = v;
      best_s = s;
    }
  }
  double lo = std::max(0.0, best_s - c / n), hi = std::min(c, best_s + c / n);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double fa = g(a), fb = g(b);
  for (int i = 0; i < 120 && hi - lo > 1e-14 * std::max(1.0, c); ++i) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = g(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = g(b);
    }
  }
  best = std::min({best, g(lo), g(0.5 * (lo + hi)), g(hi)});
  double deficit = std::max(0.0, -best);
  return {deficit, 2.0 * deficit};
}

}  // namespace pucci1d
