#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "pucci1d/certify.hpp"
#include "pucci1d/homoclinic.hpp"
#include "pucci1d/scalar.hpp"

using namespace pucci1d;

namespace {

Nonlinearity square() { return Nonlinearity::power_sum({{1.0, 2.0}}, 0.5); }
Nonlinearity cube() { return Nonlinearity::power_sum({{1.0, 3.0}}, 0.5); }

double sech2_soliton(double x) {
  double s = 1.0 / std::cosh(0.5 * x);
  return 1.5 * s * s;
}

double max_energy_drift(const Trajectory& tr, const ScalarLandscape& ls) {
  std::vector<double> e = energy_series(tr, ls);
  double drift = 0.0;
  for (double v : e) drift = std::max(drift, std::fabs(v - e.front()));
  return drift;
}

}  // namespace

TEST_CASE("trajectory matches the sech^2 soliton") {
  ScalarLandscape ls(square(), 1.0);
  Trajectory tr = integrate_ivp(ls, 1.0, 1.5, 20.0, 1e-3);
  REQUIRE(tr.size() == 20001);
  double sup = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i)
    sup = std::max(sup, std::fabs(tr.u(i) - sech2_soliton(tr.x(i))));
  CHECK(sup <= 1e-8);
}

TEST_CASE("equilibrium amplitude gives a constant trajectory") {
  ScalarLandscape ls(square(), 1.0);
  Trajectory tr = integrate_ivp(ls, 1.0, 1.0, 5.0, 1e-2);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(tr.u(i) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tr.du(i) == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK(tr.events().empty());
}

TEST_CASE("supercritical amplitude hits zero at the quadrature location") {
  ScalarLandscape ls(square(), 1.0);
  Trajectory tr = integrate_ivp(ls, 1.0, 2.0, 20.0, 1e-3);
  const TrajectoryEvent* ev = tr.first_event(EventKind::hits_zero);
  REQUIRE(ev != nullptr);
  // oracle: x = int_0^2 du / sqrt(2 (G(2) - G(u)))
  CHECK(ev->x == doctest::Approx(1.9753000914967595).epsilon(1e-8));
  CHECK(tr.size() <= 1977);  // march stops at the crossing
}

TEST_CASE("orbit classification") {
  ScalarLandscape ls(square(), 1.0);
  CHECK(classify_amplitude(ls, 1.6) == OrbitClass::Crossing);
  CHECK(classify_amplitude(ls, 1.2) == OrbitClass::Periodic);
  CHECK(classify_amplitude(ls, 1.5) == OrbitClass::Homoclinic);
  CHECK(classify_amplitude(ls, 0.4) == OrbitClass::Periodic);
  CHECK_THROWS_AS(classify_amplitude(ls, 1.0), equilibrium_error);
  CHECK_THROWS_AS(classify_amplitude(ls, -0.5), validation_error);
}

TEST_CASE("energy conservation is fourth order in the step") {
  ScalarLandscape ls(square(), 1.0);
  double d_coarse = max_energy_drift(integrate_ivp(ls, 1.0, 1.4, 20.0, 2e-2), ls);
  double d_half = max_energy_drift(integrate_ivp(ls, 1.0, 1.4, 20.0, 1e-2), ls);
  CHECK(d_coarse / d_half >= 8.0);
  double d_fine = max_energy_drift(integrate_ivp(ls, 1.0, 1.4, 20.0, 1e-3), ls);
  CHECK(d_fine <= 1e-8);
}

TEST_CASE("zero-energy identity along the near-homoclinic trajectory") {
  ScalarLandscape ls(square(), 1.0);
  double a0 = ls.homoclinic_amplitude();
  for (double mu : {1.0, 2.0}) {
    Trajectory tr = integrate_ivp(ls, mu, a0 * (1.0 - 1e-9), 25.0, 1e-3);
    std::vector<double> e = energy_series(tr, ls);
    double worst = 0.0;
    for (double v : e) worst = std::max(worst, std::fabs(v));
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("degenerate ground state reproduces the sech^2 soliton") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams p(1.0, 1.0, Branch::plus);
  GroundState gs = build_ground_state(p, ls, 30.0, 1e-3);

  const Profile& u = gs.profile();
  double sup = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    sup = std::max(sup, std::fabs(u[i] - sech2_soliton(u.x(i))));
  CHECK(sup <= 1e-6);
  CHECK(gs.max_value() == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(gs.y1() == doctest::Approx(1.3169578969248167).epsilon(1e-9));
  CHECK(gs.decay_c2() == doctest::Approx(1.0).epsilon(0.02));
  CHECK(gs.glue_gap_d1() <= 1e-9);
  CHECK(gs.glue_gap_d2() <= 1e-9);
}

TEST_CASE("cubic ground state reproduces the sech soliton") {
  ScalarLandscape ls(cube(), 1.0);
  PucciParams p(1.0, 1.0, Branch::minus);
  GroundState gs = build_ground_state(p, ls, 30.0, 1e-3);
  const Profile& u = gs.profile();
  double sup = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    sup = std::max(sup,
                   std::fabs(u[i] - std::sqrt(2.0) / std::cosh(u.x(i))));
  CHECK(sup <= 1e-6);
  CHECK(gs.y1() == doctest::Approx(0.8813735870195430).epsilon(1e-9));
}

TEST_CASE("pucci ground states: amplitudes, glue, decay") {
  ScalarLandscape ls(square(), 1.0);

  PucciParams plus(1.0, 2.0, Branch::plus);
  GroundState gp = build_ground_state(plus, ls, 44.0, 1e-2);
  CHECK(gp.max_value() ==
        doctest::Approx((1.0 + std::sqrt(3.0)) / 2.0).epsilon(1e-8));
  CHECK(gp.glue_gap_d1() <= 1e-6);
  CHECK(gp.glue_gap_d2() <= 1e-6);
  CHECK(gp.decay_c2() == doctest::Approx(std::sqrt(0.5)).epsilon(0.02));

  PucciParams minus(1.0, 2.0, Branch::minus);
  GroundState gm = build_ground_state(minus, ls, 32.0, 1e-2);
  CHECK(gm.max_value() == doctest::Approx(1.67765069880406).epsilon(1e-4));
  CHECK(gm.decay_c2() == doctest::Approx(1.0).epsilon(0.02));

  // ordering around the homoclinic amplitude
  double a0 = ls.homoclinic_amplitude();
  CHECK(gm.max_value() >= a0);
  CHECK(gp.max_value() <= a0);

  // even by construction
  const Profile& u = gp.profile();
  for (std::size_t j = 0; j <= u.center_index(); ++j)
    CHECK(u[u.center_index() - j] == u[u.center_index() + j]);
}

TEST_CASE("ground state residual is second order away from the glue point") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams plus(1.0, 2.0, Branch::plus);
  for (double h : {2e-2, 1e-2}) {
    GroundState gs = build_ground_state(plus, ls, 44.0, h);
    CHECK(gs.residual_sup() <= 10.0 * h * h * (1.0 + gs.max_value()));
    CHECK(gs.glue_residual() <= 0.2 * h);
  }
}

TEST_CASE("domain too small for the tail is rejected") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams plus(1.0, 2.0, Branch::plus);
  CHECK_THROWS_AS(build_ground_state(plus, ls, 10.0, 1e-2),
                  domain_too_small_error);
}

TEST_CASE("restriction is node exact") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams p(1.0, 1.0, Branch::plus);
  GroundState gs = build_ground_state(p, ls, 30.0, 1e-2);
  Profile r = gs.restricted(20.0);
  CHECK(r.size() == 4001);
  for (std::size_t i = 0; i < r.size(); ++i)
    CHECK(r[i] == gs.profile()[gs.profile().center_index() - 2000 + i]);
}

TEST_CASE("uniqueness probe reproduces the profile from interior data") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams p(1.0, 1.0, Branch::plus);
  GroundState gs = build_ground_state(p, ls, 26.0, 1e-3);

  ProbeResult at_peak = uniqueness_probe(gs, 0.0);
  CHECK(at_peak.sup_error <= 1e-7);
  CHECK(!at_peak.low_signal);

  ProbeResult at_glue = uniqueness_probe(gs, gs.y1());
  CHECK(at_glue.sup_error <= 1e-7);

  ProbeResult far = uniqueness_probe(gs, 18.0);
  CHECK(far.sup_error <= 1e-7);
  CHECK(far.low_signal);

  CHECK_THROWS_AS(uniqueness_probe(gs, 30.0), validation_error);
}

TEST_CASE("uniqueness probe across the pucci glue") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams plus(1.0, 2.0, Branch::plus);
  GroundState gs = build_ground_state(plus, ls, 36.0, 2e-3);
  ProbeResult pr = uniqueness_probe(gs, 0.0);
  CHECK(pr.sup_error <= 1e-7);
}

TEST_CASE("ground state csv keeps the sample column readable") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams p(1.0, 1.0, Branch::plus);
  GroundState gs = build_ground_state(p, ls, 26.0, 1e-2);
  auto path = std::filesystem::temp_directory_path() / "pucci1d_gs.csv";
  gs.save_csv(path.string());
  Profile back = Profile::load_csv(path.string());
  REQUIRE(back.size() == gs.profile().size());
  for (std::size_t i = 0; i < back.size(); ++i)
    CHECK(back[i] == gs.profile()[i]);
  std::filesystem::remove(path);
}
