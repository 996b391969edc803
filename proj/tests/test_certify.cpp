#include <doctest.h>

#include <cmath>

#include "pucci1d/bvp.hpp"
#include "pucci1d/certify.hpp"
#include "pucci1d/homoclinic.hpp"
#include "pucci1d/scalar.hpp"

using namespace pucci1d;

namespace {

Nonlinearity square() { return Nonlinearity::power_sum({{1.0, 2.0}}, 0.5); }

Profile shifted_copy(const Profile& u, double shift) {
  Profile out(u.L(), u.h(), u.provenance());
  long k = std::lround(shift / u.h());
  auto n = static_cast<long>(u.size());
  for (long i = 0; i < n; ++i) {
    long src = i - k;
    out[static_cast<std::size_t>(i)] =
        (src >= 0 && src < n) ? u[static_cast<std::size_t>(src)] : 0.0;
  }
  return out;
}

}  // namespace

TEST_CASE("weight rate selection satisfies both constraints strictly") {
  PucciParams p2(1.0, 2.0, Branch::plus);
  double r = select_weight_rate(p2, 1.0, 0.5, std::sqrt(0.5));
  CHECK(r == doctest::Approx(0.9 * 0.4).epsilon(1e-6));
  CHECK(r < std::sqrt(0.5));
  CHECK(p2.Lambda * r * r * 1.25 * 1.25 < 0.5);

  PucciParams p1(1.0, 1.0, Branch::plus);
  double r2 = select_weight_rate(p1, 1.0, 0.5, 1.0);
  CHECK(r2 == doctest::Approx(0.50912).epsilon(1e-4));

  // large V0: the decay estimate dominates
  double r3 = select_weight_rate(p1, 100.0, 0.5, 1.0);
  CHECK(r3 == doctest::Approx(0.9).epsilon(1e-9));

  CHECK_THROWS_AS(select_weight_rate(p1, 1.0, 0.5, 0.0), validation_error);
}

TEST_CASE("weighted sup norm") {
  Profile zero(5.0, 0.01, Provenance::constructed);
  CHECK(weighted_sup_norm(zero, 0.5).value == 0.0);

  Profile e(5.0, 0.01, Provenance::constructed);
  for (std::size_t i = 0; i < e.size(); ++i)
    e[i] = std::exp(-std::fabs(e.x(i)));
  WeightedNorm wn = weighted_sup_norm(e, 0.5);
  CHECK(wn.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(e.x(wn.argmax_index) == doctest::Approx(0.0));

  // faster weight than decay: the maximum runs to the boundary
  WeightedNorm wild = weighted_sup_norm(e, 2.0);
  CHECK(!wild.interior);
}

TEST_CASE("weighted norm of the pucci ground state stays interior") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams plus(1.0, 2.0, Branch::plus);
  GroundState gs = build_ground_state(plus, ls, 44.0, 1e-2);
  WeightedNorm wn = weighted_sup_norm(gs.profile(), 0.36);
  CHECK(wn.interior);
  CHECK(std::isfinite(wn.value));
  CHECK(wn.value >= gs.max_value());
}

TEST_CASE("single peak detection") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams p(1.0, 1.0, Branch::plus);
  GroundState gs = build_ground_state(p, ls, 26.0, 1e-2);
  PeakCheck pk = single_peak(gs.profile());
  CHECK(pk.single);
  CHECK(gs.profile().x(pk.index) == doctest::Approx(0.0));

  Profile two(10.0, 0.01, Provenance::constructed);
  for (std::size_t i = 0; i < two.size(); ++i) {
    double x = two.x(i);
    two[i] = std::exp(-(x - 3) * (x - 3)) + std::exp(-(x + 3) * (x + 3));
  }
  CHECK(!single_peak(two).single);

  Profile zero(5.0, 0.01, Provenance::constructed);
  CHECK_THROWS_AS(single_peak(zero), not_applicable_error);

  // flat top of width 2h is still a single peak
  Profile flat(5.0, 0.01, Provenance::constructed);
  for (std::size_t i = 0; i < flat.size(); ++i)
    flat[i] = std::max(0.0, 1.0 - std::fabs(flat.x(i)));
  std::size_t c = flat.center_index();
  flat[c - 1] = flat[c + 1] = flat[c];
  CHECK(single_peak(flat).single);
  // a wider plateau is not
  flat[c - 2] = flat[c + 2] = flat[c];
  CHECK(!single_peak(flat).single);
}

TEST_CASE("decay fit on exact exponential data") {
  Profile e(20.0, 0.01, Provenance::constructed);
  for (std::size_t i = 0; i < e.size(); ++i)
    e[i] = 2.5 * std::exp(-std::fabs(e.x(i)));
  DecayFit fit = decay_fit(e);
  CHECK(fit.c2 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fit.c1 == doctest::Approx(2.5).epsilon(1e-6));

  Profile bad(20.0, 0.01, Provenance::constructed);
  CHECK_THROWS_AS(decay_fit(bad), fit_error);
}

TEST_CASE("decay fit on the sech^2 profile approaches rate 1") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams p(1.0, 1.0, Branch::plus);
  GroundState gs = build_ground_state(p, ls, 30.0, 1e-2);
  DecayFit fit = decay_fit(gs.profile(), 0.7, 0.95);
  CHECK(fit.c2 == doctest::Approx(1.0).epsilon(0.02));
  // sech^2(x/2) ~ 4 exp(-x): the prefactor fit sees 4 * 1.5
  CHECK(fit.c1 == doctest::Approx(6.0).epsilon(0.05));
}

TEST_CASE("limit-potential energy vanishes on tails and degenerate states") {
  ScalarLandscape ls(square(), 1.0);
  auto V = Potential::constant(1.0);

  // degenerate slopes: zero everywhere (the weighted and the phase-plane
  // energies coincide)
  {
    PucciParams p(1.0, 1.0, Branch::plus);
    GroundState gs = build_ground_state(p, ls, 30.0, 1e-2);
    std::vector<double> E =
        energy_series(gs.profile(), EnergyKind::limit_potential, p, V, ls);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < E.size(); ++i)
      worst = std::max(worst, std::fabs(E[i]));
    CHECK(worst <= 5e-4);  // O(h^2) from centered first differences
  }

  // split slopes: zero beyond the glue point; on the core the value is
  // G(core amplitude), not zero (the derivative weight differs from the
  // core slope there)
  {
    PucciParams p(1.0, 2.0, Branch::plus);
    GroundState gs = build_ground_state(p, ls, 44.0, 1e-2);
    const Profile& u = gs.profile();
    std::vector<double> E =
        energy_series(u, EnergyKind::limit_potential, p, V, ls);
    double worst_tail = 0.0;
    for (std::size_t i = 1; i + 1 < E.size(); ++i)
      if (std::fabs(u.x(i)) > gs.y1() + u.h())
        worst_tail = std::max(worst_tail, std::fabs(E[i]));
    CHECK(worst_tail <= 5e-4);
    CHECK(E[u.center_index()] ==
          doctest::Approx(ls.G(gs.max_value())).epsilon(1e-6));
  }
}

TEST_CASE("frozen-potential energy has matching levels at constant V") {
  ScalarLandscape ls(square(), 1.0);
  auto V = Potential::constant(1.0);
  PucciParams p(1.0, 2.0, Branch::plus);
  GroundState gs = build_ground_state(p, ls, 44.0, 1e-2);
  LevelPair lp = locate_level_pair(gs.profile(), V, ls.f());
  CHECK(lp.z == doctest::Approx(gs.y1()).epsilon(1e-4));
  CHECK(lp.y == doctest::Approx(-gs.y1()).epsilon(1e-4));

  std::vector<double> H = energy_series(
      gs.profile(), EnergyKind::frozen_potential, p, V, ls, lp.z);
  auto at = [&](double x) {
    double t = (x + gs.profile().L()) / gs.profile().h();
    auto i = static_cast<std::size_t>(t);
    return H[i] + (t - i) * (H[i + 1] - H[i]);
  };
  CHECK(at(lp.z) == doctest::Approx(at(lp.y)).epsilon(1e-6));
}

TEST_CASE("level pair on the sech^2 profile sits at height 1") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams p(1.0, 1.0, Branch::plus);
  GroundState gs = build_ground_state(p, ls, 30.0, 1e-2);
  LevelPair lp = locate_level_pair(gs.profile(), Potential::constant(1.0),
                                   ls.f());
  CHECK(gs.profile().interp(lp.z) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(lp.z == doctest::Approx(1.3169578969).epsilon(1e-4));
}

TEST_CASE("level pair is asymmetric for a monotone potential candidate") {
  auto V = Potential::monotone(1.0, 1.5, 7.0);
  ScalarLandscape ls(square(), V.v_inf());
  PucciParams p(1.0, 2.0, Branch::plus);
  GroundState gs = build_ground_state(p, ls, 48.0, 5e-3);
  DiscreteOperator op(p, V, square(), 15.0, 5e-3);
  Bump bump(1.0);
  auto [u, info] = solve_full(op, 0.0,
                              shifted_copy(gs.restricted(15.0), -12.0), bump);
  REQUIRE(info.converged);
  LevelPair lp = locate_level_pair(u, V, ls.f());
  CHECK(std::fabs(lp.y + lp.z) > 1e-3);  // y != -z
}

TEST_CASE("certificate is consistent on exact ground states at constant V") {
  ScalarLandscape ls(square(), 1.0);
  auto V = Potential::constant(1.0);
  for (Branch br : {Branch::plus, Branch::minus}) {
    PucciParams p(1.0, 2.0, br);
    GroundState gs = build_ground_state(p, ls, 44.0, 1e-2);
    Certificate cert =
        nonexistence_certificate(gs.restricted(30.0), V, p, ls);
    CHECK(!cert.strict_violation);
    for (const auto& l : cert.links) {
      CHECK(l.ok);
      CHECK(std::fabs(l.value) <= 1e-3);  // near all-equality
    }
  }
}

TEST_CASE("certificate fires on a converged impostor under a monotone V") {
  auto V = Potential::monotone(1.0, 1.5, 7.0);
  ScalarLandscape ls(square(), V.v_inf());
  PucciParams p(1.0, 2.0, Branch::plus);
  const double L = 15.0, h = 5e-3;
  GroundState gs = build_ground_state(p, ls, 48.0, h);
  DiscreteOperator op(p, V, square(), L, h);
  Bump bump(1.0);

  auto [u, info] =
      solve_full(op, 0.0, shifted_copy(gs.restricted(L), -12.0), bump);
  REQUIRE(info.converged);
  REQUIRE(u.sup_norm() > 0.5);

  Certificate cert = nonexistence_certificate(u, V, p, ls);
  CHECK(cert.strict_violation);
  CHECK(!cert.broken_link.empty());

  // reflected data give the same verdict, link by link
  Potential RV = reflect(V);
  Profile ru(u.L(), u.h(),
             std::vector<double>(u.values().rbegin(), u.values().rend()),
             u.provenance());
  Certificate rcert = nonexistence_certificate(ru, RV, p, ls);
  CHECK(rcert.strict_violation == cert.strict_violation);
  CHECK(rcert.broken_link == cert.broken_link);
  REQUIRE(rcert.links.size() == cert.links.size());
  for (std::size_t i = 0; i < cert.links.size(); ++i)
    CHECK(rcert.links[i].value == cert.links[i].value);
}

TEST_CASE("certificate refuses inapplicable inputs") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams p(1.0, 2.0, Branch::plus);
  GroundState gs = build_ground_state(p, ls, 44.0, 1e-2);
  auto W = Potential::well(1.0, 0.3, 3.0);  // not monotone
  CHECK_THROWS_AS(
      nonexistence_certificate(gs.restricted(30.0), W, p, ls),
      not_applicable_error);

  Profile zero(30.0, 1e-2, Provenance::constructed);
  CHECK_THROWS_AS(
      nonexistence_certificate(zero, Potential::monotone(1.0, 1.5, 1.0), p,
                               ls),
      not_applicable_error);
}

TEST_CASE("certificate json names the verdict") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams p(1.0, 1.0, Branch::plus);
  GroundState gs = build_ground_state(p, ls, 30.0, 1e-2);
  Certificate cert = nonexistence_certificate(gs.profile(),
                                              Potential::constant(1.0), p, ls);
  std::string j = cert.to_json();
  CHECK(j.find("\"verdict\":\"consistent\"") != std::string::npos);
  CHECK(j.find("\"chain\"") != std::string::npos);
}

TEST_CASE("branch diagnostics: equalities at constant V, flag on corruption") {
  ScalarLandscape ls(square(), 1.0);
  PucciParams p(1.0, 1.0, Branch::plus);
  auto V = Potential::constant(1.0);
  GroundState gs = build_ground_state(p, ls, 40.0, 1e-2);
  DiscreteOperator op(p, V, square(), 30.0, 1e-2);
  Bump bump(1.0);
  auto [u, info] = solve_full(op, 0.0, gs.restricted(30.0), bump);
  REQUIRE(info.converged);

  SolutionBranch branch;
  branch.entries.push_back({0.0, u, info.residual, u.sup_norm(), 0.0, true});
  BranchDiagnostics diag = branch_energy_diagnostics(branch, V, p, ls);
  REQUIRE(diag.entries.size() == 1);
  CHECK(diag.worst_upper >= -1e-4);
  CHECK(diag.worst_ordering >= -1e-4);
  CHECK(diag.worst_left_slope <= 1e-4);
  CHECK(diag.worst_left_gap <= 1e-4);
}

TEST_CASE("branch diagnostics flag a corrupted profile on a well") {
  // A pure translation leaves the direct energy checks invariant, so the
  // flag is the gap between the direct slope and the substituted form.
  auto V = Potential::well(1.0, 0.3, 1.0);
  ScalarLandscape ls(square(), V.v_inf());
  PucciParams p(1.0, 1.0, Branch::plus);
  GroundState gs = build_ground_state(p, ls, 40.0, 1e-2);
  DiscreteOperator op(p, V, square(), 30.0, 1e-2);
  Bump bump(0.1);
  auto [u, info] = solve_full(op, 0.0, gs.restricted(30.0), bump);
  REQUIRE(info.converged);

  SolutionBranch good;
  good.entries.push_back({0.0, u, info.residual, u.sup_norm(), 0.0, true});
  BranchDiagnostics ok = branch_energy_diagnostics(good, V, p, ls, &bump);
  CHECK(ok.worst_left_gap <= 1e-5);

  SolutionBranch bad;
  bad.entries.push_back(
      {0.0, shifted_copy(u, 5.0), info.residual, u.sup_norm(), 0.0, true});
  BranchDiagnostics flag = branch_energy_diagnostics(bad, V, p, ls, &bump);
  CHECK(flag.worst_left_gap > 1e-4);
}

TEST_CASE("branch diagnostics hold along a well-potential ladder") {
  auto V = Potential::well(1.0, 0.3, 3.0);
  ScalarLandscape ls(square(), V.v_inf());
  PucciParams p(1.0, 2.0, Branch::plus);
  GroundState gs = build_ground_state(p, ls, 48.0, 1e-2);
  DiscreteOperator op(p, V, square(), 30.0, 1e-2);
  Bump bump(0.1);

  SolutionBranch branch = continuation(op, {0.5, 0.25, 0.0},
                                       gs.restricted(30.0), bump, 0.36);
  for (const auto& e : branch.entries) REQUIRE(e.converged);
  BranchDiagnostics diag = branch_energy_diagnostics(branch, V, p, ls);
  CHECK(diag.worst_upper >= -1e-6);
  CHECK(diag.worst_ordering >= -1e-6);
}
