#include "pucci1d/model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace pucci1d {

using nlohmann::json;

namespace {

// Quintic smoothstep: C^2, S(0)=0, S(1)=1, S'(0)=S'(1)=S''(0)=S''(1)=0.
double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep5_d(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  double u = t * (1.0 - t);
  return 30.0 * u * u;
}

// Gauss-Legendre nodes/weights on [-1,1], generated once by Newton iteration.
struct GaussRule {
  std::array<double, 32> x{}, w{};
  GaussRule() {
    const int n = 32;
    for (int i = 0; i < n / 2; ++i) {
      double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double p0 = 0, p1 = 0;
      for (int iter = 0; iter < 100; ++iter) {
        p0 = 1.0;
        p1 = t;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::fabs(dt) < 1e-16) break;
      }
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      x[i] = -t;
      x[n - 1 - i] = t;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

const GaussRule& gauss32() {
  static const GaussRule rule;
  return rule;
}

template <class F>
double integrate32(F&& f, double a, double b) {
  const auto& g = gauss32();
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 32; ++i) acc += g.w[i] * f(mid + half * g.x[i]);
  return acc * half;
}

// Locale-independent shortest-round-trip double formatting.
std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw error("cannot parse number: " + s);
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// PucciParams
// ---------------------------------------------------------------------------

PucciParams::PucciParams(double lam, double Lam, Branch b)
    : lambda(lam), Lambda(Lam), branch(b) {
  if (!(lam > 0.0) || !std::isfinite(lam) || !std::isfinite(Lam))
    throw validation_error("PucciParams: lambda must be positive and finite");
  if (!(lam <= Lam))
    throw validation_error("PucciParams: need lambda <= Lambda");
}

// ---------------------------------------------------------------------------
// Nonlinearity
// ---------------------------------------------------------------------------

namespace {

// Cutoff eta(s): 1 on [0,2], 0 on [3,inf), C^2 and nonincreasing.
double cutoff(double s) { return 1.0 - smoothstep5(s - 2.0); }
double cutoff_d(double s) { return -smoothstep5_d(s - 2.0); }

double hybrid_raw(double s, double p, double C) {
  if (s <= 0.0) return 0.0;
  if (s <= 2.0) return std::pow(s, p);
  if (s >= 3.0) return C * s * std::log(s);
  double e = cutoff(s);
  return e * std::pow(s, p) + (1.0 - e) * C * s * std::log(s);
}

// max over [2,3] of s^{p-1} / log s, the smallest admissible C.
double min_log_coefficient(double p) {
  double best = 0.0;
  const int n = 8192;
  for (int i = 0; i <= n; ++i) {
    double s = 2.0 + static_cast<double>(i) / n;
    best = std::max(best, std::pow(s, p - 1.0) / std::log(s));
  }
  return best;
}

}  // namespace

Nonlinearity Nonlinearity::power_sum(std::vector<PowerTerm> terms,
                                     double eta0) {
  if (terms.empty())
    throw validation_error("Nonlinearity: need at least one power term");
  double pmin = std::numeric_limits<double>::infinity();
  for (const auto& t : terms) {
    if (!(t.a > 0.0) || !std::isfinite(t.a))
      throw validation_error("Nonlinearity: coefficients must be positive");
    if (!(t.p > 1.0) || !std::isfinite(t.p))
      throw validation_error("Nonlinearity: exponents must exceed 1");
    pmin = std::min(pmin, t.p);
  }
  if (!(eta0 > 0.0) || !(eta0 < pmin - 1.0))
    throw validation_error(
        "Nonlinearity: need 0 < eta0 < min_i(p_i - 1) so that "
        "s^{-1-eta0} f(s) -> 0");
  Nonlinearity f;
  f.kind_ = NonlinearityKind::power_sum;
  f.terms_ = std::move(terms);
  f.eta0_ = eta0;
  return f;
}

Nonlinearity Nonlinearity::log_hybrid(double p, double eta0,
                                      std::optional<double> C) {
  if (!(p > 1.0)) throw validation_error("Nonlinearity: need p > 1");
  if (!(eta0 > 0.0) || !(eta0 < p - 1.0))
    throw validation_error("Nonlinearity: need 0 < eta0 < p - 1");
  double cmin = min_log_coefficient(p);
  double c = C.value_or(cmin);
  if (c < cmin - 1e-12)
    throw validation_error(
        "Nonlinearity: log coefficient too small, need C log s >= s^{p-1} "
        "on [2,3] (minimum " +
        fmt_double(cmin) + ")");
  Nonlinearity f;
  f.kind_ = NonlinearityKind::log_hybrid;
  f.terms_ = {{1.0, p}};
  f.eta0_ = eta0;
  f.C_ = c;
  f.F_cut_lo_ = std::pow(2.0, p + 1.0) / (p + 1.0);
  f.F_cut_hi_ =
      f.F_cut_lo_ +
      integrate32([&](double s) { return hybrid_raw(s, p, c); }, 2.0, 3.0);
  return f;
}

double Nonlinearity::min_exponent() const { return terms_.front().p; }

double Nonlinearity::eval(double s) const {
  if (s <= 0.0) return 0.0;
  if (kind_ == NonlinearityKind::power_sum) {
    double acc = 0.0;
    for (const auto& t : terms_) acc += t.a * std::pow(s, t.p);
    return acc;
  }
  return hybrid_raw(s, terms_.front().p, C_);
}

long double Nonlinearity::eval_ld(long double s) const {
  if (s <= 0.0L) return 0.0L;
  if (kind_ == NonlinearityKind::power_sum) {
    long double acc = 0.0L;
    for (const auto& t : terms_)
      acc += static_cast<long double>(t.a) * powl(s, static_cast<long double>(t.p));
    return acc;
  }
  long double p = terms_.front().p, C = C_;
  if (s <= 2.0L) return powl(s, p);
  if (s >= 3.0L) return C * s * logl(s);
  long double t = s - 2.0L;
  long double e = 1.0L - t * t * t * (10.0L + t * (-15.0L + 6.0L * t));
  return e * powl(s, p) + (1.0L - e) * C * s * logl(s);
}

long double Nonlinearity::primitive_ld(long double s) const {
  if (s <= 0.0L) return 0.0L;
  if (kind_ == NonlinearityKind::power_sum) {
    long double acc = 0.0L;
    for (const auto& t : terms_) {
      long double p = t.p;
      acc += static_cast<long double>(t.a) * powl(s, p + 1.0L) / (p + 1.0L);
    }
    return acc;
  }
  long double p = terms_.front().p;
  if (s <= 2.0L) return powl(s, p + 1.0L) / (p + 1.0L);
  return static_cast<long double>(primitive(static_cast<double>(s)));
}

double Nonlinearity::derivative(double s) const {
  if (s <= 0.0) return 0.0;
  if (kind_ == NonlinearityKind::power_sum) {
    double acc = 0.0;
    for (const auto& t : terms_) acc += t.a * t.p * std::pow(s, t.p - 1.0);
    return acc;
  }
  double p = terms_.front().p;
  if (s <= 2.0) return p * std::pow(s, p - 1.0);
  if (s >= 3.0) return C_ * (std::log(s) + 1.0);
  double e = cutoff(s), ed = cutoff_d(s);
  return ed * (std::pow(s, p) - C_ * s * std::log(s)) +
         e * p * std::pow(s, p - 1.0) + (1.0 - e) * C_ * (std::log(s) + 1.0);
}

double Nonlinearity::primitive(double s) const {
  if (s <= 0.0) return 0.0;
  if (kind_ == NonlinearityKind::power_sum) {
    double acc = 0.0;
    for (const auto& t : terms_)
      acc += t.a * std::pow(s, t.p + 1.0) / (t.p + 1.0);
    return acc;
  }
  double p = terms_.front().p;
  if (s <= 2.0) return std::pow(s, p + 1.0) / (p + 1.0);
  if (s <= 3.0)
    return F_cut_lo_ +
           integrate32([&](double t) { return hybrid_raw(t, p, C_); }, 2.0, s);
  // integral of C t log t = C (t^2/2 log t - t^2/4)
  auto tail = [&](double t) {
    return C_ * (0.5 * t * t * std::log(t) - 0.25 * t * t);
  };
  return F_cut_hi_ + tail(s) - tail(3.0);
}

std::string Nonlinearity::to_json() const {
  json j;
  if (kind_ == NonlinearityKind::power_sum) {
    j["kind"] = "power_sum";
    json arr = json::array();
    for (const auto& t : terms_) arr.push_back({{"a", t.a}, {"p", t.p}});
    j["terms"] = arr;
  } else {
    j["kind"] = "log_hybrid";
    j["p"] = terms_.front().p;
    j["C"] = C_;
  }
  j["eta0"] = eta0_;
  return j.dump();
}

Nonlinearity Nonlinearity::from_json(const std::string& text) {
  json j = json::parse(text);
  std::string kind = j.at("kind").get<std::string>();
  double eta0 = j.at("eta0").get<double>();
  if (kind == "power_sum") {
    std::vector<PowerTerm> terms;
    for (const auto& t : j.at("terms"))
      terms.push_back({t.at("a").get<double>(), t.at("p").get<double>()});
    return power_sum(std::move(terms), eta0);
  }
  if (kind == "log_hybrid") {
    std::optional<double> C;
    if (j.contains("C")) C = j.at("C").get<double>();
    return log_hybrid(j.at("p").get<double>(), eta0, C);
  }
  throw validation_error("Nonlinearity: unknown kind " + kind);
}

// ---------------------------------------------------------------------------
// Potential
// ---------------------------------------------------------------------------

Potential Potential::constant(double value) {
  if (!(value > 0.0))
    throw validation_error("Potential: invalid-potential, need V0 > 0");
  Potential V;
  V.kind_ = PotentialKind::constant;
  V.value_ = value;
  return V;
}

Potential Potential::well(double v_inf, double c0, double rate) {
  if (!(v_inf - c0 > 0.0))
    throw validation_error("Potential: invalid-potential, need V0 = v_inf - c0 > 0");
  if (!(c0 >= 0.0) || !(rate > 0.0))
    throw validation_error("Potential: well needs c0 >= 0 and rate > 0");
  Potential V;
  V.kind_ = PotentialKind::well;
  V.v_inf_ = v_inf;
  V.c0_ = c0;
  V.rate_ = rate;
  return V;
}

Potential Potential::monotone(double v_lower, double v_upper, double width) {
  if (!(v_lower > 0.0))
    throw validation_error("Potential: invalid-potential, need V0 > 0");
  if (!(v_lower < v_upper))
    throw validation_error("Potential: monotone needs v_lower < v_upper");
  if (!(width > 0.0)) throw validation_error("Potential: width must be positive");
  Potential V;
  V.kind_ = PotentialKind::monotone;
  V.v_lower_ = v_lower;
  V.v_upper_ = v_upper;
  V.width_ = width;
  return V;
}

Potential Potential::tabulated(std::vector<double> x, std::vector<double> v) {
  if (x.size() != v.size() || x.size() < 2)
    throw validation_error("Potential: tabulated needs matching arrays, size >= 2");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1]))
      throw validation_error("Potential: tabulated abscissae must increase");
  double vmin = *std::min_element(v.begin(), v.end());
  if (!(vmin > 0.0))
    throw validation_error("Potential: invalid-potential, need V0 > 0");
  Potential V;
  V.kind_ = PotentialKind::tabulated;
  V.tab_x_ = std::move(x);
  V.tab_v_ = std::move(v);
  return V;
}

double Potential::eval(double x) const {
  switch (kind_) {
    case PotentialKind::constant:
      return value_;
    case PotentialKind::well:
      return v_inf_ - c0_ * std::exp(-rate_ * std::fabs(x));
    case PotentialKind::monotone:
      return v_lower_ +
             (v_upper_ - v_lower_) * 0.5 * (1.0 + std::tanh(x / width_));
    case PotentialKind::reflected:
      return inner_->eval(-x);
    case PotentialKind::tabulated: {
      if (x <= tab_x_.front()) return tab_v_.front();
      if (x >= tab_x_.back()) return tab_v_.back();
      auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
      std::size_t i = static_cast<std::size_t>(it - tab_x_.begin());
      double t = (x - tab_x_[i - 1]) / (tab_x_[i] - tab_x_[i - 1]);
      return tab_v_[i - 1] + t * (tab_v_[i] - tab_v_[i - 1]);
    }
  }
  return 0.0;
}

double Potential::derivative(double x) const {
  switch (kind_) {
    case PotentialKind::constant:
      return 0.0;
    case PotentialKind::well:
      return (x >= 0 ? 1.0 : -1.0) * c0_ * rate_ * std::exp(-rate_ * std::fabs(x));
    case PotentialKind::monotone: {
      double c = std::cosh(x / width_);
      return (v_upper_ - v_lower_) * 0.5 / (width_ * c * c);
    }
    case PotentialKind::reflected:
      return -inner_->derivative(-x);
    case PotentialKind::tabulated: {
      if (x <= tab_x_.front() || x >= tab_x_.back()) return 0.0;
      auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
      std::size_t i = static_cast<std::size_t>(it - tab_x_.begin());
      return (tab_v_[i] - tab_v_[i - 1]) / (tab_x_[i] - tab_x_[i - 1]);
    }
  }
  return 0.0;
}

double Potential::v0() const {
  switch (kind_) {
    case PotentialKind::constant:
      return value_;
    case PotentialKind::well:
      return v_inf_ - c0_;
    case PotentialKind::monotone:
      return v_lower_;
    case PotentialKind::reflected:
      return inner_->v0();
    case PotentialKind::tabulated:
      return *std::min_element(tab_v_.begin(), tab_v_.end());
  }
  return 0.0;
}

double Potential::v_inf() const {
  switch (kind_) {
    case PotentialKind::constant:
      return value_;
    case PotentialKind::well:
      return v_inf_;
    case PotentialKind::monotone:
      return v_upper_;
    case PotentialKind::reflected:
      // limit at +inf of x |-> V(-x) is the inner limit at -inf
      return inner_->kind_ == PotentialKind::monotone ? inner_->v_lower_
                                                      : inner_->v_inf();
    case PotentialKind::tabulated:
      return tab_v_.back();
  }
  return 0.0;
}

Potential reflect(const Potential& V) {
  switch (V.kind_) {
    case PotentialKind::constant:
    case PotentialKind::well:
      return V;  // even
    case PotentialKind::reflected:
      return *V.inner_;
    case PotentialKind::tabulated: {
      std::vector<double> x(V.tab_x_.rbegin(), V.tab_x_.rend());
      for (auto& xi : x) xi = -xi;
      std::vector<double> v(V.tab_v_.rbegin(), V.tab_v_.rend());
      return Potential::tabulated(std::move(x), std::move(v));
    }
    case PotentialKind::monotone: {
      Potential R;
      R.kind_ = PotentialKind::reflected;
      R.inner_ = std::make_shared<Potential>(V);
      return R;
    }
  }
  return V;
}

std::string Potential::to_json() const {
  json j;
  switch (kind_) {
    case PotentialKind::constant:
      j = {{"kind", "constant"}, {"value", value_}};
      break;
    case PotentialKind::well:
      j = {{"kind", "well"}, {"v_inf", v_inf_}, {"c0", c0_}, {"rate", rate_}};
      break;
    case PotentialKind::monotone:
      j = {{"kind", "monotone"},
           {"v_lower", v_lower_},
           {"v_upper", v_upper_},
           {"width", width_}};
      break;
    case PotentialKind::reflected:
      j = {{"kind", "reflected"}, {"inner", json::parse(inner_->to_json())}};
      break;
    case PotentialKind::tabulated:
      j = {{"kind", "tabulated"}, {"x", tab_x_}, {"v", tab_v_}};
      break;
  }
  return j.dump();
}

Potential Potential::from_json(const std::string& text) {
  json j = json::parse(text);
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return constant(j.at("value").get<double>());
  if (kind == "well")
    return well(j.at("v_inf").get<double>(), j.at("c0").get<double>(),
                j.at("rate").get<double>());
  if (kind == "monotone")
    return monotone(j.at("v_lower").get<double>(),
                    j.at("v_upper").get<double>(),
                    j.value("width", 1.0));
  if (kind == "reflected")
    return reflect(from_json(j.at("inner").dump()));
  if (kind == "tabulated")
    return tabulated(j.at("x").get<std::vector<double>>(),
                     j.at("v").get<std::vector<double>>());
  throw validation_error("Potential: unknown kind " + kind);
}

// ---------------------------------------------------------------------------
// Bump
// ---------------------------------------------------------------------------

Bump::Bump(double radius) : radius_(radius) {
  if (!(radius > 0.0)) throw validation_error("Bump: radius must be positive");
}

double Bump::eval(double x) const {
  double a = std::fabs(x);
  if (a <= radius_) return 1.0;
  if (a >= 2.0 * radius_) return 0.0;
  return 1.0 - smoothstep5((a - radius_) / radius_);
}

// ---------------------------------------------------------------------------
// Profile
// ---------------------------------------------------------------------------

namespace {

std::size_t checked_half(double L, double h) {
  if (!(L > 0.0) || !(h > 0.0)) throw validation_error("Profile: need L, h > 0");
  double n = L / h;
  auto half = static_cast<std::size_t>(std::llround(n));
  if (half < 2 || std::fabs(half * h - L) > 1e-9 * std::max(1.0, L))
    throw validation_error("Profile: L must be an integral multiple of h");
  return half;
}

}  // namespace

Profile::Profile(double L, double h, Provenance tag)
    : L_(L), h_(h), half_(checked_half(L, h)), values_(2 * half_ + 1, 0.0),
      tag_(tag) {}

Profile::Profile(double L, double h, std::vector<double> values,
                 Provenance tag)
    : L_(L), h_(h), half_(checked_half(L, h)), values_(std::move(values)),
      tag_(tag) {
  if (values_.size() != 2 * half_ + 1)
    throw validation_error("Profile: values length does not match grid");
}

double Profile::interp(double x) const {
  if (x <= -L_) return values_.front();
  if (x >= L_) return values_.back();
  double t = (x + L_) / h_;
  auto i = static_cast<std::size_t>(t);
  if (i >= values_.size() - 1) i = values_.size() - 2;
  double frac = t - static_cast<double>(i);
  return values_[i] + frac * (values_[i + 1] - values_[i]);
}

double Profile::d1(std::size_t i) const {
  std::size_t n = values_.size();
  if (i == 0)
    return (-3.0 * values_[0] + 4.0 * values_[1] - values_[2]) / (2.0 * h_);
  if (i == n - 1)
    return (3.0 * values_[n - 1] - 4.0 * values_[n - 2] + values_[n - 3]) /
           (2.0 * h_);
  return (values_[i + 1] - values_[i - 1]) / (2.0 * h_);
}

double Profile::d2(std::size_t i) const {
  std::size_t n = values_.size();
  if (i == 0 || i == n - 1) return 0.0;
  return (values_[i + 1] - 2.0 * values_[i] + values_[i - 1]) / (h_ * h_);
}

double Profile::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

std::size_t Profile::argmax() const {
  return static_cast<std::size_t>(
      std::max_element(values_.begin(), values_.end()) - values_.begin());
}

void Profile::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw error("cannot open " + path + " for writing");
  out << "x,u\n";
  for (std::size_t i = 0; i < values_.size(); ++i)
    out << fmt_double(x(i)) << ',' << fmt_double(values_[i]) << '\n';
}

Profile Profile::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,u", 0) != 0)
    throw error("Profile: expected header starting with x,u in " + path);
  std::vector<double> xs, us;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw error("Profile: malformed row " + line);
    std::string rest = line.substr(comma + 1);
    auto next = rest.find(',');  // tolerate extra columns (u', u'')
    if (next != std::string::npos) rest = rest.substr(0, next);
    xs.push_back(parse_double(line.substr(0, comma)));
    us.push_back(parse_double(rest));
  }
  if (xs.size() < 5) throw error("Profile: too few rows in " + path);
  double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  double L = 0.5 * (xs.back() - xs.front());
  Profile u(L, h, std::move(us), Provenance::loaded);
  return u;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

bool ValidationReport::all_passed() const {
  return std::all_of(items.begin(), items.end(),
                     [](const ValidationItem& it) { return it.passed; });
}

const ValidationItem* ValidationReport::find(const std::string& name) const {
  for (const auto& it : items)
    if (it.name == name) return &it;
  return nullptr;
}

std::string ValidationReport::to_json() const {
  json arr = json::array();
  for (const auto& it : items)
    arr.push_back({{"name", it.name}, {"passed", it.passed}, {"detail", it.detail}});
  return json{{"items", arr}, {"all_passed", all_passed()}}.dump();
}

ValidationReport validate_nonlinearity(const Nonlinearity& f, int samples) {
  if (samples < 10)
    throw validation_error("validate_nonlinearity: need samples >= 10");
  ValidationReport rep;

  auto safe_eval = [&](double s) {
    double v = f.eval(s);
    if (!std::isfinite(v))
      throw validation_error("invalid-nonlinearity: non-finite value at s=" +
                             fmt_double(s));
    return v;
  };

  // sign: vanishes on s <= 0, positive on s > 0
  bool sign_ok = safe_eval(-1.0) == 0.0 && safe_eval(0.0) == 0.0;
  for (int i = 0; i < samples && sign_ok; ++i) {
    double s = std::pow(10.0, -6.0 + 9.0 * i / (samples - 1.0));
    sign_ok = safe_eval(s) > 0.0;
  }
  rep.items.push_back({"sign", sign_ok, "f = 0 on s <= 0, f > 0 on s > 0"});

  // small-s decay: s^{-1-eta0} f(s) -> 0
  double first = 0, last = 0;
  bool decay_ok = true;
  for (int i = 0; i < samples; ++i) {
    double s = std::pow(10.0, -1.0 - 6.0 * i / (samples - 1.0));
    double r = safe_eval(s) * std::pow(s, -1.0 - f.eta0());
    if (i == 0) first = r;
    if (i == samples - 1) last = r;
    if (!std::isfinite(r)) decay_ok = false;
  }
  decay_ok = decay_ok && last < std::min(1e-3, 0.01 * std::max(first, 1e-300));
  rep.items.push_back({"small_s_decay", decay_ok,
                       "s^{-1-eta0} f: " + fmt_double(first) + " -> " +
                           fmt_double(last)});

  // superlinearity: f(s)/s increasing without bound on a log-spaced grid
  bool grow_ok = true;
  double r_lo = safe_eval(1.0), r_hi = 0.0, prev = -1.0;
  for (int i = 0; i < samples; ++i) {
    double s = std::pow(10.0, 8.0 * i / (samples - 1.0));
    double r = safe_eval(s) / s;
    if (r <= prev) grow_ok = false;
    prev = r;
    r_hi = r;
  }
  grow_ok = grow_ok && r_hi >= 10.0 * std::max(r_lo, 1e-300);
  rep.items.push_back({"superlinear", grow_ok,
                       "f(s)/s from " + fmt_double(r_lo) + " to " +
                           fmt_double(r_hi) + " over 8 decades"});

  // strict monotonicity of f(s)/s
  bool mono_ok = true;
  prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4 * samples; ++i) {
    double s = std::pow(10.0, -4.0 + 8.0 * i / (4.0 * samples - 1.0));
    double r = safe_eval(s) / s;
    if (!(r > prev)) mono_ok = false;
    prev = r;
  }
  rep.items.push_back({"ratio_increasing", mono_ok, "f(s)/s strictly increasing"});

  return rep;
}

std::vector<double> growth_ratios(const Nonlinearity& f, double theta,
                                  const std::vector<double>& s_values) {
  std::vector<double> out;
  out.reserve(s_values.size());
  for (double s : s_values) out.push_back(f.eval(theta * s) / f.eval(s));
  return out;
}

ValidationReport validate_potential(const Potential& V,
                                    PotentialHypothesis hypothesis,
                                    const PucciParams& params, double L,
                                    double h) {
  if (!(V.v0() > 0.0))
    throw validation_error("invalid-potential: V0 <= 0");
  ValidationReport rep;

  auto half = static_cast<std::size_t>(std::llround(L / h));
  auto xat = [&](std::size_t i) {
    return (static_cast<double>(i) - static_cast<double>(half)) * h;
  };
  std::size_t n = 2 * half + 1;

  double vmin = std::numeric_limits<double>::infinity(), vmax = 0, dmax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = xat(i);
    double v = V.eval(x);
    if (!std::isfinite(v))
      throw validation_error("invalid-potential: non-finite value");
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
    dmax = std::max(dmax, std::fabs(V.derivative(x)));
  }
  bool v1 = vmin > 0.0 && std::isfinite(vmax) && std::isfinite(dmax);
  rep.items.push_back({"V1", v1,
                       "inf V = " + fmt_double(std::min(vmin, V.v0())) +
                           ", sup |V'| = " + fmt_double(dmax)});

  const double tol = 1e-12;
  if (hypothesis == PotentialHypothesis::well) {
    bool shape = true;
    for (std::size_t i = 0; i < n; ++i) {
      double x = xat(i);
      double d = V.derivative(x);
      if (x < 0 && d > tol) shape = false;
      if (x > 0 && d < -tol) shape = false;
    }
    rep.items.push_back({"V2", shape, "V' <= 0 on (-inf,0), V' >= 0 on (0,inf)"});

    double vinf = V.v_inf();
    bool ordered = V.eval(0.0) <= vinf + tol;
    double mu = params.branch == Branch::plus ? params.Lambda : params.lambda;
    bool gap_ok = true;
    double xi0 = 0.0, c0 = 0.0;
    double gmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double g = vinf - V.eval(xat(i));
      if (g < -tol) gap_ok = false;
      gmax = std::max(gmax, g);
    }
    if (gmax <= 1e-13 * std::max(1.0, vinf)) {
      // flat potential: any xi0 works
      xi0 = 1.0;
      c0 = 0.0;
    } else if (V.kind() == PotentialKind::well) {
      double b = V.well_rate();
      double xi_max = b * b / 4.0 - vinf / mu;
      if (xi_max > 0.0) {
        xi0 = 0.5 * xi_max;
        c0 = V.well_depth();
        double r = 2.0 * std::sqrt(vinf / mu + xi0);
        for (std::size_t i = 0; i < n && gap_ok; ++i) {
          double x = xat(i);
          if (vinf - V.eval(x) > c0 * std::exp(-r * std::fabs(x)) + 1e-12)
            gap_ok = false;
        }
      } else {
        gap_ok = false;
      }
    } else {
      // generic kinds: log-fit the gap decay over the outer part of the grid
      double rate = std::numeric_limits<double>::infinity();
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int m = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double x = std::fabs(xat(i));
        if (x < 0.5 * L || x > 0.9 * L) continue;
        double g = vinf - V.eval(xat(i));
        if (g <= 0) continue;
        double y = std::log(g);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
      }
      if (m >= 4) {
        double denom = m * sxx - sx * sx;
        rate = -(m * sxy - sx * sy) / denom;
      }
      double need = 2.0 * std::sqrt(vinf / mu);
      gap_ok = gap_ok && rate > need + 1e-9;
      if (gap_ok) xi0 = 0.5 * ((rate / 2) * (rate / 2) - vinf / mu);
    }
    rep.items.push_back(
        {"V3", ordered && gap_ok,
         "V(0) <= V_inf and gap <= C0 exp(-2 sqrt(V_inf/mu + xi0)|x|), xi0 = " +
             fmt_double(xi0)});
  } else {
    // either orientation is admitted; a nonincreasing potential is the
    // reflected variant and is handled by mirroring downstream
    bool nondec = true, noninc = true;
    for (std::size_t i = 0; i < n; ++i) {
      double d = V.derivative(xat(i));
      if (d < -tol) nondec = false;
      if (d > tol) noninc = false;
    }
    double lo = V.eval(-L), hi = V.eval(L);
    bool ok = (nondec && hi - lo > tol) || (noninc && lo - hi > tol);
    rep.items.push_back({"V2'", ok,
                         "one-signed V' with distinct limits " +
                             fmt_double(lo) + ", " + fmt_double(hi)});
  }
  return rep;
}

}  // namespace pucci1d
