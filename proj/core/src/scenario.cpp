#include "pucci1d/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pucci1d/bvp.hpp"
#include "pucci1d/certify.hpp"
#include "pucci1d/homoclinic.hpp"
#include "pucci1d/model.hpp"
#include "pucci1d/scalar.hpp"

namespace pucci1d {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PucciParams parse_params(const json& j) {
  const json& p = j.at("params");
  std::string b = p.at("branch").get<std::string>();
  if (b != "plus" && b != "minus")
    throw ConfigError("params.branch must be \"plus\" or \"minus\"");
  return PucciParams(p.at("lambda").get<double>(), p.at("Lambda").get<double>(),
                     b == "plus" ? Branch::plus : Branch::minus);
}

struct GridExtent {
  double L, h;
};

GridExtent parse_grid(const json& j) {
  const json& g = j.at("grid");
  return {g.at("L").get<double>(), g.at("h").get<double>()};
}

json options_of(const json& j) {
  return j.contains("options") ? j.at("options") : json::object();
}

// Builds the ground state, enlarging the domain in powers of two until the
// tail fits, then restricting back to the requested half-length.
GroundState build_with_auto_domain(const PucciParams& params,
                                   const ScalarLandscape& ls, double L,
                                   double h) {
  for (int scale = 1; scale <= 16; scale *= 2) {
    try {
      return build_ground_state(params, ls, scale * L, h);
    } catch (const domain_too_small_error&) {
      if (scale == 16) throw;
    }
  }
  throw domain_too_small_error("ground state does not fit in 16 L");
}

Profile make_init(const json& opts, const DiscreteOperator& op,
                  const PucciParams& params, const ScalarLandscape& ls,
                  const Bump& bump) {
  Profile init = op.zero_profile();
  json choice = opts.value("init", json("ground_state"));
  if (choice.is_object() && choice.contains("csv")) {
    Profile loaded = Profile::load_csv(choice.at("csv").get<std::string>());
    op.check_grid(loaded);
    init = loaded;
  } else {
    std::string kind = choice.get<std::string>();
    if (kind == "zero") {
      // keep zeros
    } else if (kind == "bump") {
      double scale = opts.value("init_scale", 1.0);
      for (std::size_t i = 0; i < init.size(); ++i)
        init[i] = scale * bump.eval(init.x(i));
    } else if (kind == "ground_state") {
      GroundState gs = build_with_auto_domain(params, ls, op.L(), op.h());
      init = gs.restricted(op.L());
    } else {
      throw ConfigError("options.init must be zero|bump|ground_state|{csv}");
    }
  }
  double shift = opts.value("init_shift", 0.0);
  if (shift != 0.0) {
    auto k = static_cast<long>(std::llround(shift / op.h()));
    Profile shifted = op.zero_profile();
    auto n = static_cast<long>(init.size());
    for (long i = 0; i < n; ++i) {
      long src = i - k;
      shifted[static_cast<std::size_t>(i)] =
          (src >= 0 && src < n) ? init[static_cast<std::size_t>(src)] : 0.0;
    }
    init = shifted;
  }
  return init;
}

json landscape_report(const ScalarLandscape& ls, const PucciParams& params) {
  MatchingLevels lv = matching_levels(params, ls);
  ForcingThreshold ft = forcing_threshold(ls.f(), ls.v_inf());
  return json{{"v_inf", ls.v_inf()},
              {"center", ls.center()},
              {"homoclinic_amplitude", ls.homoclinic_amplitude()},
              {"g_min", ls.g_min()},
              {"levels",
               {{"low", lv.low},
                {"plus_amplitude", lv.plus_amplitude},
                {"minus_amplitude", lv.minus_amplitude}}},
              {"forcing", {{"deficit", ft.deficit}, {"t_min", ft.t_min}}}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw error("cannot open " + path.string() + " for writing");
  out << text << '\n';
}

int run_one(const json& cfg, const fs::path& out_dir);
int run_guarded(const json& cfg, const fs::path& out_dir);

int run_sweep(const json& cfg, const fs::path& out_dir) {
  const json& list = cfg.at("scenarios");
  if (!list.is_array() || list.empty())
    throw ConfigError("sweep needs a nonempty scenarios array");

  std::vector<int> codes(list.size(), 0);
  std::vector<std::string> names(list.size());
  for (std::size_t i = 0; i < list.size(); ++i)
    names[i] = list[i].value("name", "scenario_" + std::to_string(i));

  std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                            list.size());
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= list.size()) return;
        codes[i] = run_guarded(list[i], out_dir / names[i]);
      }
    });
  for (auto& th : pool) th.join();

  json index = json::array();
  for (std::size_t i = 0; i < list.size(); ++i)
    index.push_back({{"name", names[i]}, {"exit_code", codes[i]}});
  write_text(out_dir / "index.json", index.dump(2));
  return *std::max_element(codes.begin(), codes.end());
}

int run_one(const json& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::string task = cfg.at("task").get<std::string>();
  if (task == "sweep") return run_sweep(cfg, out_dir);

  PucciParams params = parse_params(cfg);
  Nonlinearity f = Nonlinearity::from_json(cfg.at("nonlinearity").dump());
  Potential V = Potential::from_json(cfg.at("potential").dump());
  GridExtent grid = parse_grid(cfg);
  json opts = options_of(cfg);

  json report{{"schema_version", 1},
              {"task", task},
              {"params",
               {{"lambda", params.lambda},
                {"Lambda", params.Lambda},
                {"branch", params.branch == Branch::plus ? "plus" : "minus"}}},
              {"grid", {{"L", grid.L}, {"h", grid.h}}},
              {"nonlinearity", json::parse(f.to_json())},
              {"potential", json::parse(V.to_json())}};

  // declared-hypothesis validation gate
  std::string hyp = opts.value(
      "hypothesis",
      V.kind() == PotentialKind::monotone || V.kind() == PotentialKind::reflected
          ? std::string("monotone")
          : std::string("well"));
  ValidationReport vf = validate_nonlinearity(f, 64);
  ValidationReport vp = validate_potential(
      V, hyp == "monotone" ? PotentialHypothesis::monotone
                           : PotentialHypothesis::well,
      params, grid.L, std::max(grid.h, 1e-3));
  report["validation"] = {{"nonlinearity", json::parse(vf.to_json())},
                          {"potential", json::parse(vp.to_json())},
                          {"hypothesis", hyp}};
  bool skip_gate = opts.value("skip_validation", false);
  if (!skip_gate && (!vf.all_passed() || !vp.all_passed())) {
    write_text(out_dir / "report.json", report.dump(2));
    std::cerr << "validation failed, see report.json\n";
    return 2;
  }

  ScalarLandscape ls(f, V.v_inf());
  report["landscape"] = landscape_report(ls, params);
  report["sup_floor"] = solution_sup_floor(f, V.v0());

  Bump bump(opts.value("bump_radius", 1.0));
  const char* side = params.branch == Branch::plus ? "plus" : "minus";

  if (task == "omega") {
    GroundState gs = build_ground_state(params, ls, grid.L, grid.h);
    gs.save_csv((out_dir / (std::string("omega_") + side + ".csv")).string());
    write_text(out_dir / (std::string("omega_") + side + ".json"),
               gs.to_json());
    report["omega"] = json::parse(gs.to_json());
    write_text(out_dir / "report.json", report.dump(2));
    return 0;
  }

  DiscreteOperator op(params, V, f, grid.L, grid.h);
  double c2_est = std::sqrt(
      ls.v_inf() /
      (params.branch == Branch::plus ? params.Lambda : params.lambda));
  double rate = select_weight_rate(params, V.v0(), f.eta0(), c2_est);

  if (task == "solve") {
    double t = opts.value("t", 0.0);
    Profile init = make_init(opts, op, params, ls, bump);
    auto [u, info] = solve_full(op, t, init, bump);
    u.save_csv((out_dir / "solution.csv").string());
    json sol{{"converged", info.converged},
             {"residual", info.residual},
             {"iterations", info.iterations},
             {"message", info.message},
             {"sup_norm", u.sup_norm()},
             {"weight_rate", rate}};
    if (info.converged && u.sup_norm() > 0.0) {
      WeightedNorm wn = weighted_sup_norm(u, rate);
      PeakCheck pk = single_peak(u);
      sol["x_norm"] = wn.value;
      sol["x_norm_interior"] = wn.interior;
      sol["single_peak"] = pk.single;
      sol["peak_x"] = u.x(pk.index);
      try {
        DecayFit fit = decay_fit(u);
        sol["decay"] = {{"c1", fit.c1}, {"c2", fit.c2}};
      } catch (const fit_error&) {
        sol["decay"] = nullptr;
      }
    }
    report["solution"] = sol;
    write_text(out_dir / "report.json", report.dump(2));
    return info.converged ? 0 : 3;
  }

  if (task == "branch") {
    std::vector<double> ladder =
        cfg.at("options").at("t_ladder").get<std::vector<double>>();
    Profile init = make_init(opts, op, params, ls, bump);
    SolutionBranch branch = continuation(op, ladder, init, bump, rate);
    branch.save_csv((out_dir / "branch.csv").string());
    json entries = json::array();
    for (const auto& e : branch.entries)
      entries.push_back({{"t", e.t},
                         {"sup_norm", e.sup_norm},
                         {"x_norm", e.x_norm},
                         {"residual", e.residual},
                         {"converged", e.converged}});
    report["branch"] = {{"max_sup_norm", branch.max_sup_norm()},
                        {"entries", entries}};
    if (opts.value("diagnostics", true)) {
      try {
        BranchDiagnostics diag =
            branch_energy_diagnostics(branch, V, params, ls);
        report["branch"]["diagnostics"] = json::parse(diag.to_json());
      } catch (const error& e) {
        report["branch"]["diagnostics"] = {{"error", e.what()}};
      }
    }
    if (!branch.entries.empty())
      branch.entries.back().u.save_csv((out_dir / "final.csv").string());
    write_text(out_dir / "report.json", report.dump(2));
    return branch.entries.back().converged ? 0 : 3;
  }

  if (task == "certify") {
    Profile candidate = op.zero_profile();
    json cand = opts.value("candidate", json("solve"));
    bool solved_ok = true;
    if (cand.is_object() && cand.contains("csv")) {
      candidate = Profile::load_csv(cand.at("csv").get<std::string>());
      op.check_grid(candidate);
    } else if (cand.get<std::string>() == "ground_state") {
      GroundState gs = build_with_auto_domain(params, ls, grid.L, grid.h);
      candidate = gs.restricted(grid.L);
    } else {
      Profile init = make_init(opts, op, params, ls, bump);
      auto [u, info] = solve_full(op, 0.0, init, bump);
      candidate = u;
      solved_ok = info.converged;
      report["solution"] = {{"converged", info.converged},
                            {"residual", info.residual},
                            {"iterations", info.iterations}};
    }
    candidate.save_csv((out_dir / "candidate.csv").string());
    if (!solved_ok) {
      write_text(out_dir / "report.json", report.dump(2));
      return 3;
    }
    Certificate cert = nonexistence_certificate(candidate, V, params, ls);
    write_text(out_dir / "certificate.json", cert.to_json());
    report["certificate"] = json::parse(cert.to_json());
    write_text(out_dir / "report.json", report.dump(2));
    bool expect_consistent = opts.value("expect", "consistent") ==
                             std::string("consistent");
    return (cert.strict_violation && expect_consistent) ? 4 : 0;
  }

  throw ConfigError("unknown task " + task);
}

// Maps failures onto the documented exit codes.
int run_guarded(const json& cfg, const fs::path& out_dir) {
  try {
    return run_one(cfg, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "malformed config: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "malformed config: " << e.what() << '\n';
    return 1;
  } catch (const validation_error& e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return 2;
  } catch (const domain_too_small_error& e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return 2;
  } catch (const landscape_error& e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return 2;
  } catch (const solver_stall_error& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int run_scenario(const std::string& config_text, const std::string& out_dir,
                 const std::string& task_override) {
  json cfg;
  try {
    cfg = json::parse(config_text);
    if (!task_override.empty()) {
      if (cfg.contains("task") &&
          cfg.at("task").get<std::string>() != task_override) {
        std::cerr << "config task disagrees with the subcommand\n";
        return 1;
      }
      cfg["task"] = task_override;
    }
    if (!cfg.contains("task")) throw ConfigError("missing task");
  } catch (const std::exception& e) {
    std::cerr << "malformed config: " << e.what() << '\n';
    return 1;
  }

  return run_guarded(cfg, fs::path(out_dir));
}

int run_scenario_file(const std::string& config_path,
                      const std::string& out_dir,
                      const std::string& task_override) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot open config " << config_path << '\n';
    return 1;
  }
  std::string text{std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>()};
  return run_scenario(text, out_dir, task_override);
}

}  // namespace pucci1d
