#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "izone/error.hpp"
#include "izone/pipeline.hpp"
#include "izone/report.hpp"
#include "izone/sensitivity.hpp"
#include "izone/swing_sim.hpp"

namespace fs = std::filesystem;
using namespace izone;

namespace {

#ifndef IZONE_DEFAULT_FIXTURES
#define IZONE_DEFAULT_FIXTURES ""
#endif

fs::path resolve_input(const std::string& name) {
  if (fs::exists(name)) return name;
  const char* env = std::getenv("IZONE_FIXTURES");
  const fs::path dir = env ? fs::path(env) : fs::path(IZONE_DEFAULT_FIXTURES);
  if (!dir.empty() && fs::exists(dir / name)) return dir / name;
  throw Error("input file not found: " + name);
}

NetworkCase load_effective_case(const RunConfig& cfg) {
  NetworkCase net = load_case(resolve_input(cfg.case_path));
  if (cfg.scenario_path)
    net = apply_scenario(net, load_scenario(resolve_input(*cfg.scenario_path)));
  return net;
}

void add_shared_flags(CLI::App* cmd, RunConfig& cfg, std::string& formats) {
  cmd->add_option("--case", cfg.case_path, "case file (path or fixture name)")
      ->required();
  cmd->add_option("--scenario", cfg.scenario_path, "scenario overlay file");
  cmd->add_option("--r", cfg.r, "slow-mode count")->capture_default_str();
  cmd->add_option("--tau", cfg.tau, "auto-k relative tolerance")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--out", cfg.out_dir, "output directory")
      ->capture_default_str();
  cmd->add_option("--formats", formats, "comma list from {json,csv,svg}")
      ->capture_default_str();
}

void apply_formats(RunConfig& cfg, const std::string& formats) {
  cfg.format_json = cfg.format_csv = cfg.format_svg = false;
  std::set<std::string> seen;
  std::string cur;
  for (char ch : formats + ",") {
    if (ch == ',') {
      if (!cur.empty()) seen.insert(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  for (const auto& f : seen) {
    if (f == "json")
      cfg.format_json = true;
    else if (f == "csv")
      cfg.format_csv = true;
    else if (f == "svg")
      cfg.format_svg = true;
    else
      throw Error("unknown format '" + f + "' (expected json, csv, svg)");
  }
  if (!cfg.format_json && !cfg.format_csv && !cfg.format_svg)
    throw Error("--formats selected nothing");
}

int cmd_zones(const RunConfig& cfg) {
  PipelineResult p =
      run_pipeline(load_effective_case(cfg), cfg.r, cfg.tau, cfg.seed,
                   cfg.max_iter);
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  if (cfg.format_json) report::write_zones_json(out / "zones.json", p, cfg);
  if (cfg.format_csv) report::write_zones_csv(out / "zones.csv", p, cfg);
  if (cfg.format_svg) report::write_zones_svg(out / "zones.svg", p, cfg);
  std::cout << "k=" << p.zr.k << " buses=" << p.zr.bus_order.size() << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg, int bus, double h_from, double h_to,
              double h_step) {
  if (!(h_from < h_to)) throw Error("sweep: require h_from < h_to");
  if (!(h_step > 0)) throw Error("sweep: require h_step > 0");
  const NetworkCase base = load_effective_case(cfg);
  if (!base.find_generator(bus))
    throw Error("sweep: bus " + std::to_string(bus) + " hosts no generator");

  std::vector<report::SweepRow> rows;
  for (double h = h_from; h <= h_to + 1e-12; h += h_step) {
    NetworkCase c = base;
    for (auto& g : c.generators)
      if (g.bus_id == bus) g.inertia_h = h;
    PipelineResult p = run_pipeline(std::move(c), cfg.r, cfg.tau, cfg.seed,
                                    cfg.max_iter);
    for (size_t i = 0; i < p.zr.bus_order.size(); ++i)
      rows.push_back({h, p.zr.bus_order[i],
                      p.dnw.all_weights(Eigen::Index(i)), p.zr.assignment[i]});
  }
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  if (cfg.format_csv || cfg.format_json)
    report::write_sweep_csv(out / "sweep.csv", rows, cfg);
  if (cfg.format_svg) report::write_sweep_svg(out / "sweep.svg", rows, bus, cfg);
  std::cout << "sweep rows=" << rows.size() << "\n";
  return 0;
}

int cmd_sensitivity(const RunConfig& cfg, const std::string& parameter,
                    double epsilon) {
  if (!(epsilon > 0)) throw Error("sensitivity: epsilon must be positive");
  const NetworkCase base = load_effective_case(cfg);
  std::vector<PerturbParameter> params;
  if (parameter == "all")
    params = {PerturbParameter::voltage_mag, PerturbParameter::voltage_ang,
              PerturbParameter::inertia};
  else if (parameter == "voltage_mag")
    params = {PerturbParameter::voltage_mag};
  else if (parameter == "voltage_ang")
    params = {PerturbParameter::voltage_ang};
  else if (parameter == "inertia")
    params = {PerturbParameter::inertia};
  else
    throw Error("unknown parameter '" + parameter + "'");

  std::vector<StudyRow> rows;
  for (auto p : params) rows.push_back(dnw_sensitivity_study(base, p, epsilon));

  const PartitionedLaplacian pl = build_laplacian(base);
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  report::write_sensitivity_csv(out / "sensitivity.csv", rows, pl.gen_order,
                                cfg);
  for (const auto& r : rows)
    std::cout << report::parameter_name(r.parameter) << " u1var=" << r.u1var
              << "\n";
  return 0;
}

int cmd_simulate(const RunConfig& cfg, const DisturbanceSpec& d, double dt,
                 double horizon) {
  PipelineResult p =
      run_pipeline(load_effective_case(cfg), cfg.r, cfg.tau, cfg.seed,
                   cfg.max_iter);
  const Eigen::VectorXd inj = injection_profile(p.pl, d.bus_id);
  const Trajectory tr = simulate(p.rd, d, dt, horizon, &inj);
  const CoherenceScore score = coherence_score(tr, p.zr, d);

  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  if (cfg.format_csv || cfg.format_svg)
    report::write_trajectory_csv(out / "trajectory.csv", tr, cfg);
  if (cfg.format_json)
    report::write_coherence_json(out / "coherence.json", d, score, cfg);
  std::cout << "intra=" << score.intra << " inter=" << score.inter << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inertia-zone screening toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string formats = "json,csv,svg";

  auto* zones = app.add_subcommand("zones", "cluster buses into inertia zones");
  add_shared_flags(zones, cfg, formats);

  auto* sweep = app.add_subcommand("sweep", "DNW vs inertia sweep at one bus");
  add_shared_flags(sweep, cfg, formats);
  int sweep_bus = 0;
  double h_from = 2.0, h_to = 6.0, h_step = 1.0;
  sweep->add_option("--bus", sweep_bus, "swept generator bus")->required();
  sweep->add_option("--h-from", h_from, "first inertia value, s")
      ->capture_default_str();
  sweep->add_option("--h-to", h_to, "last inertia value, s")
      ->capture_default_str();
  sweep->add_option("--h-step", h_step, "step, s")->capture_default_str();

  auto* sens = app.add_subcommand("sensitivity", "DNW eigen-sensitivity study");
  add_shared_flags(sens, cfg, formats);
  std::string parameter = "all";
  double epsilon = 0.2;
  sens->add_option("--parameter", parameter,
                   "voltage_mag | voltage_ang | inertia | all")
      ->capture_default_str();
  sens->add_option("--epsilon", epsilon, "perturbation fraction")
      ->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "linearized swing simulation");
  add_shared_flags(sim, cfg, formats);
  DisturbanceSpec dist;
  std::string kind = "power_step";
  double dt = 1e-3, horizon = 10.0;
  sim->add_option("--bus", dist.bus_id, "disturbed bus")->required();
  sim->add_option("--kind", kind, "power_step | angle_impulse")
      ->capture_default_str();
  sim->add_option("--size", dist.size, "disturbance size, p.u. or rad")
      ->required();
  sim->add_option("--t-start", dist.t_start, "s")->capture_default_str();
  double t_end = 0.1;
  sim->add_option("--t-end", t_end, "s")->capture_default_str();
  sim->add_option("--dt", dt, "integration step, s")->capture_default_str();
  sim->add_option("--horizon", horizon, "s")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    apply_formats(cfg, formats);
    if (zones->parsed()) return cmd_zones(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg, sweep_bus, h_from, h_to, h_step);
    if (sens->parsed()) return cmd_sensitivity(cfg, parameter, epsilon);
    if (sim->parsed()) {
      dist.t_end = t_end;
      dist.kind = kind == "angle_impulse" ? DisturbanceKind::angle_impulse
                                          : DisturbanceKind::power_step;
      if (kind != "power_step" && kind != "angle_impulse")
        throw Error("unknown disturbance kind '" + kind + "'");
      return cmd_simulate(cfg, dist, dt, horizon);
    }
  } catch (const Error& e) {
    std::cerr << report::error_document(e.what());
    return 1;
  } catch (const std::exception& e) {
    std::cerr << report::error_document(std::string("internal error: ") +
                                        e.what());
    return 1;
  }
  return 2;
}
