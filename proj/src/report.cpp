#include "izone/report.hpp"

#include <cstdio>
#include <fstream>
#include <map>

#include "izone/error.hpp"
#include "izone/svg.hpp"

namespace izone::report {

namespace {

using nlohmann::ordered_json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << body;
}

std::string csv_header(const RunConfig& cfg) {
  return "# config " + config_meta(cfg).dump() + "\n";
}

}  // namespace

ordered_json config_meta(const RunConfig& cfg) {
  ordered_json j;
  j["schema_version"] = 1;
  j["case"] = cfg.case_path;
  j["scenario"] = cfg.scenario_path ? ordered_json(*cfg.scenario_path)
                                    : ordered_json(nullptr);
  j["r"] = cfg.r;
  j["tau"] = cfg.tau;
  j["seed"] = cfg.seed;
  j["max_iter"] = cfg.max_iter;
  j["merw_matrix"] = "abs_symmetric";
  return j;
}

void write_zones_json(const std::filesystem::path& path,
                      const PipelineResult& p, const RunConfig& cfg) {
  ordered_json j = config_meta(cfg);
  j["k"] = p.zr.k;
  ordered_json assignment = ordered_json::object();
  for (size_t i = 0; i < p.zr.bus_order.size(); ++i)
    assignment[std::to_string(p.zr.bus_order[i])] = p.zr.assignment[i];
  j["assignment"] = assignment;
  ordered_json seps = ordered_json::array();
  for (int c = 0; c < p.zr.k; ++c) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index d = 0; d < p.zr.seps.cols(); ++d)
      row.push_back(p.zr.seps(c, d));
    seps.push_back(row);
  }
  j["seps"] = seps;
  ordered_json ssep = ordered_json::array();
  for (Eigen::Index d = 0; d < p.zr.system_sep.size(); ++d)
    ssep.push_back(p.zr.system_sep(d));
  j["system_sep"] = ssep;
  ordered_json sed = ordered_json::array();
  ordered_json zw = ordered_json::array();
  for (int c = 0; c < p.zr.k; ++c) {
    sed.push_back(p.zr.sed(c));
    zw.push_back(p.zr.zone_weight(c));
  }
  j["sed"] = sed;
  j["zone_weight"] = zw;
  ordered_json dnw = ordered_json::object();
  for (size_t i = 0; i < p.dnw.bus_order.size(); ++i)
    dnw[std::to_string(p.dnw.bus_order[i])] = p.dnw.all_weights(Eigen::Index(i));
  j["dnw"] = dnw;
  write_file(path, j.dump(1) + "\n");
}

void write_zones_csv(const std::filesystem::path& path, const PipelineResult& p,
                     const RunConfig& cfg) {
  std::string body = csv_header(cfg);
  body += "bus_id,zone,dnw,sed_of_zone\n";
  for (size_t i = 0; i < p.zr.bus_order.size(); ++i) {
    const int zone = p.zr.assignment[i];
    body += std::to_string(p.zr.bus_order[i]) + "," + std::to_string(zone) +
            "," + num(p.dnw.all_weights(Eigen::Index(i))) + "," +
            num(p.zr.sed(zone)) + "\n";
  }
  write_file(path, body);
}

void write_zones_svg(const std::filesystem::path& path, const PipelineResult& p,
                     const RunConfig& cfg) {
  svg::Canvas canvas(640, 520, -0.05, 1.05, -0.05, 1.05,
                     "Inertia zones (k=" + std::to_string(p.zr.k) + ")");
  // radius shows 1/Pi_M_net, clamped to a readable range
  const Eigen::VectorXd inv = p.dnw.all_weights.cwiseInverse();
  const double lo = inv.minCoeff(), hi = inv.maxCoeff();
  for (size_t i = 0; i < p.zr.bus_order.size(); ++i) {
    const double x = p.fm.values(Eigen::Index(i), 0);
    const double y = p.fm.values(Eigen::Index(i), p.fm.values.cols() > 1 ? 1 : 0);
    const double t = hi > lo ? (inv(Eigen::Index(i)) - lo) / (hi - lo) : 0.5;
    canvas.circle(x, y, 2.5 + 9.0 * t, svg::zone_color(p.zr.assignment[i]));
    canvas.label(x, y, std::to_string(p.zr.bus_order[i]));
  }
  for (int c = 0; c < p.zr.k; ++c)
    canvas.cross(p.zr.seps(c, 0), p.zr.seps.cols() > 1 ? p.zr.seps(c, 1) : 0.5,
                 7.0, "#d62728");
  canvas.circle(p.zr.system_sep(0),
                p.zr.system_sep.size() > 1 ? p.zr.system_sep(1) : 0.5, 5.0,
                "#000000");
  write_file(path, "<!-- config " + config_meta(cfg).dump() + " -->\n" +
                       canvas.str());
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows, const RunConfig& cfg) {
  std::string body = csv_header(cfg);
  body += "h,bus_id,dnw,zone\n";
  for (const auto& r : rows)
    body += num(r.h) + "," + std::to_string(r.bus_id) + "," + num(r.dnw) +
            "," + std::to_string(r.zone) + "\n";
  write_file(path, body);
}

void write_sweep_svg(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows, int swept_bus,
                     const RunConfig& cfg) {
  std::map<int, std::vector<std::pair<double, double>>> series;
  double h_lo = 0, h_hi = 1, d_hi = 0;
  bool first = true;
  for (const auto& r : rows) {
    series[r.bus_id].push_back({r.h, r.dnw});
    if (first || r.h < h_lo) h_lo = r.h;
    if (first || r.h > h_hi) h_hi = r.h;
    d_hi = std::max(d_hi, r.dnw);
    first = false;
  }
  svg::Canvas canvas(640, 520, h_lo, h_hi, 0.0, d_hi * 1.05,
                     "DNW vs H at bus " + std::to_string(swept_bus));
  int color = 0;
  for (const auto& [bus, pts] : series) {
    canvas.polyline(pts, svg::zone_color(color++));
    canvas.label(pts.back().first, pts.back().second, std::to_string(bus));
  }
  write_file(path, "<!-- config " + config_meta(cfg).dump() + " -->\n" +
                       canvas.str());
}

void write_sensitivity_csv(const std::filesystem::path& path,
                           const std::vector<StudyRow>& rows,
                           const std::vector<int>& gen_order,
                           const RunConfig& cfg) {
  std::string body = csv_header(cfg);
  body += "parameter,epsilon,u1var";
  for (int bus : gen_order) body += ",lambda1_bus" + std::to_string(bus);
  body += "\n";
  for (const auto& r : rows) {
    body += parameter_name(r.parameter) + "," + num(r.epsilon) + "," +
            num(r.u1var);
    for (Eigen::Index i = 0; i < r.lambda1.size(); ++i)
      body += "," + num(r.lambda1(i));
    body += "\n";
  }
  write_file(path, body);
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& tr, const RunConfig& cfg) {
  std::string body = csv_header(cfg);
  body += "time";
  for (int bus : tr.gen_order) body += ",omega_bus" + std::to_string(bus);
  body += "\n";
  for (Eigen::Index s = 0; s < tr.times.size(); ++s) {
    body += num(tr.times(s));
    for (Eigen::Index g = 0; g < tr.omega.rows(); ++g)
      body += "," + num(tr.omega(g, s));
    body += "\n";
  }
  write_file(path, body);
}

void write_coherence_json(const std::filesystem::path& path,
                          const DisturbanceSpec& d, const CoherenceScore& score,
                          const RunConfig& cfg) {
  ordered_json j = config_meta(cfg);
  j["disturbance"] = {
      {"bus", d.bus_id},
      {"kind", d.kind == DisturbanceKind::power_step ? "power_step"
                                                     : "angle_impulse"},
      {"size", d.size},
      {"t_start", d.t_start},
      {"t_end", d.t_end}};
  j["intra"] = score.intra;
  j["inter"] = score.inter;
  j["intra_pairs"] = score.intra_pairs;
  j["inter_pairs"] = score.inter_pairs;
  write_file(path, j.dump(1) + "\n");
}

std::string error_document(const std::string& message) {
  ordered_json j;
  j["schema_version"] = 1;
  j["error"] = message;
  return j.dump() + "\n";
}

std::string parameter_name(PerturbParameter p) {
  switch (p) {
    case PerturbParameter::voltage_mag: return "voltage_mag";
    case PerturbParameter::voltage_ang: return "voltage_ang";
    case PerturbParameter::inertia: return "inertia";
  }
  return "unknown";
}

}  // namespace izone::report
