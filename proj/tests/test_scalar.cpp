#include <doctest.h>

#include <cmath>
#include <random>

#include "pucci1d/homoclinic.hpp"
#include "pucci1d/scalar.hpp"

using namespace pucci1d;

namespace {
const PucciParams kPlus12(1.0, 2.0, Branch::plus);
const PucciParams kMinus12(1.0, 2.0, Branch::minus);

Nonlinearity square() { return Nonlinearity::power_sum({{1.0, 2.0}}, 0.5); }
Nonlinearity cube() { return Nonlinearity::power_sum({{1.0, 3.0}}, 0.5); }
}  // namespace

TEST_CASE("pucci evaluation") {
  CHECK(pucci_eval(kPlus12, 3.0) == 6.0);
  CHECK(pucci_eval(kPlus12, -3.0) == -3.0);
  CHECK(pucci_eval(PucciParams(1.0, 1.0, Branch::minus), -7.0) == -7.0);
  CHECK(pucci_eval(kMinus12, 3.0) == 3.0);
  CHECK(pucci_eval(kMinus12, -3.0) == -6.0);
}

TEST_CASE("degenerate slopes collapse both branches to lambda m") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  std::uniform_real_distribution<double> pos(0.1, 5.0);
  for (int i = 0; i < 200; ++i) {
    double lam = pos(rng);
    double m = uni(rng);
    PucciParams plus(lam, lam, Branch::plus), minus(lam, lam, Branch::minus);
    CHECK(pucci_eval(plus, m) == lam * m);
    CHECK(pucci_eval(minus, m) == lam * m);
  }
}

TEST_CASE("pucci inversion") {
  CHECK(pucci_inverse(kPlus12, 6.0) == 3.0);
  CHECK(pucci_inverse(kPlus12, -2.0) == -2.0);
  CHECK(pucci_inverse(kMinus12, 6.0) == 6.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  std::uniform_real_distribution<double> lam(0.2, 3.0);
  for (int i = 0; i < 200; ++i) {
    double a = lam(rng), b = a + lam(rng);
    for (Branch br : {Branch::plus, Branch::minus}) {
      PucciParams p(a, b, br);
      double m = uni(rng);
      CHECK(pucci_eval(p, pucci_inverse(p, m)) == doctest::Approx(m));
    }
  }
}

TEST_CASE("pucci structure: homogeneity, monotonicity, difference bound") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  std::uniform_real_distribution<double> pos(0.01, 4.0);
  for (int i = 0; i < 500; ++i) {
    double a = pos(rng), b = a + pos(rng);
    PucciParams plus(a, b, Branch::plus), minus(a, b, Branch::minus);
    double m1 = uni(rng), m2 = uni(rng), c = pos(rng);

    CHECK(pucci_eval(plus, c * m1) == doctest::Approx(c * pucci_eval(plus, m1)));
    CHECK(pucci_eval(minus, c * m1) ==
          doctest::Approx(c * pucci_eval(minus, m1)));
    if (m1 <= m2) {
      CHECK(pucci_eval(plus, m1) <= pucci_eval(plus, m2));
      CHECK(pucci_eval(minus, m1) <= pucci_eval(minus, m2));
    }
    CHECK(pucci_eval(minus, m1) <= pucci_eval(plus, m1));
    // difference inequality, exact
    CHECK(pucci_eval(plus, m1) - pucci_eval(plus, m2) >=
          pucci_eval(minus, m1 - m2) - 1e-12);
    CHECK(pucci_eval(minus, m1) - pucci_eval(minus, m2) >=
          pucci_eval(minus, m1 - m2) - 1e-12);
  }
}

TEST_CASE("center roots reproduce closed forms") {
  CHECK(find_center(square(), 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(find_center(cube(), 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(find_center(square(), 4.0) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("homoclinic amplitudes reproduce closed forms") {
  ScalarLandscape s2(square(), 1.0);
  CHECK(s2.homoclinic_amplitude() == doctest::Approx(1.5).epsilon(1e-10));
  ScalarLandscape s3(cube(), 1.0);
  CHECK(s3.homoclinic_amplitude() ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  ScalarLandscape s4(square(), 4.0);
  CHECK(s4.homoclinic_amplitude() == doctest::Approx(6.0).epsilon(1e-10));
  CHECK(s2.g_min() == doctest::Approx(-1.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("landscape sign structure") {
  ScalarLandscape ls(square(), 1.0);
  for (double s : {0.1, 0.5, 0.9}) CHECK(ls.g(s) < 0.0);
  CHECK(ls.g(ls.center()) == doctest::Approx(0.0).epsilon(1e-10));
  for (double s : {1.1, 2.0, 7.0}) CHECK(ls.g(s) > 0.0);
  for (double s : {0.3, 1.0, 1.4}) CHECK(ls.G(s) < 0.0);
  CHECK(ls.G(ls.homoclinic_amplitude()) == doctest::Approx(0.0));
  CHECK(ls.homoclinic_amplitude() > ls.center());
}

TEST_CASE("matching levels: factorized cubic") {
  ScalarLandscape ls(square(), 1.0);
  MatchingLevels lv = matching_levels(kPlus12, ls);
  CHECK(lv.low == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(lv.plus_amplitude ==
        doctest::Approx((1.0 + std::sqrt(3.0)) / 2.0).epsilon(1e-10));
  CHECK(lv.minus_amplitude ==
        doctest::Approx(1.67765069880406).epsilon(1e-9));

  MatchingLevels deg = matching_levels(PucciParams(1.0, 1.0, Branch::plus), ls);
  CHECK(deg.low == 1.0);
  CHECK(deg.plus_amplitude == 1.0);
  CHECK(deg.minus_amplitude == 1.5);
}

TEST_CASE("matching level identity for random ellipticity pairs") {
  ScalarLandscape ls(square(), 1.0);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> pos(0.2, 2.0);
  for (int i = 0; i < 100; ++i) {
    double a = pos(rng), b = a + pos(rng);
    PucciParams p(a, b, Branch::plus);
    MatchingLevels lv = matching_levels(p, ls);
    double level = (1.0 - a / b) * ls.g_min();
    CHECK(std::fabs(ls.G(lv.plus_amplitude) - level) < 1e-10);
    CHECK(std::fabs(ls.G(lv.low) - level) < 1e-10);
    double level_m = (1.0 - b / a) * ls.g_min();
    CHECK(std::fabs(ls.G(lv.minus_amplitude) - level_m) < 1e-10);
    CHECK(lv.low < ls.center());
    CHECK(ls.center() < lv.plus_amplitude);
    CHECK(lv.plus_amplitude < ls.homoclinic_amplitude());
    CHECK(lv.minus_amplitude >= ls.homoclinic_amplitude());
  }
}

TEST_CASE("matching levels agree with brute-force energy evaluation") {
  // Integrate the Lambda-slope homoclinic to its center crossing and
  // evaluate the opposite-slope energy there: this is the level the glue
  // equation prescribes, independently of the closed-form identity.
  ScalarLandscape ls(square(), 1.0);
  double a0 = ls.homoclinic_amplitude();
  for (double Lam : {2.0, 4.0}) {
    Trajectory tr = integrate_ivp(ls, Lam, a0 * (1.0 - 1e-9), 40.0, 1e-3);
    const TrajectoryEvent* ev = tr.first_event(EventKind::hits_center);
    REQUIRE(ev != nullptr);
    double lambda = 1.0;
    double level_bf = 0.5 * ev->du * ev->du + ls.G(ev->u) / lambda;
    double level_id = (1.0 / lambda - 1.0 / Lam) * ls.g_min();
    CHECK(level_bf == doctest::Approx(level_id).epsilon(1e-9));
  }
}

TEST_CASE("smallest possible sup norm") {
  CHECK(solution_sup_floor(square(), 1.0) == doctest::Approx(1.0));
  CHECK(solution_sup_floor(square(), 0.25) == doctest::Approx(0.25));
  CHECK(solution_sup_floor(cube(), 1.0) == doctest::Approx(1.0));
}

TEST_CASE("forcing threshold") {
  ForcingThreshold a = forcing_threshold(square(), 1.0);
  CHECK(a.deficit == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(a.t_min == doctest::Approx(0.5).epsilon(1e-10));

  ForcingThreshold b = forcing_threshold(cube(), 1.0);
  CHECK(b.deficit == doctest::Approx(0.3849001794597505).epsilon(1e-9));
  CHECK(b.t_min == doctest::Approx(0.7698003589195010).epsilon(1e-9));

  ForcingThreshold c = forcing_threshold(square(), 0.0);
  CHECK(c.deficit == 0.0);
  CHECK(c.t_min == 0.0);
}

TEST_CASE("bracket failure raises a landscape error") {
  // v_inf <= 0 leaves f(s)/s = v_inf without a positive root
  CHECK_THROWS_AS(find_center(square(), -1.0), landscape_error);
}
