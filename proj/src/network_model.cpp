#include "izone/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "izone/error.hpp"

namespace izone {

namespace {

using json = nlohmann::json;

GenTech parse_tech(const std::string& s) {
  if (s == "synchronous") return GenTech::synchronous;
  if (s == "dfig_wtg") return GenTech::dfig_wtg;
  throw Error("unknown generator tech '" + s + "'");
}

json read_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error("parse failure in " + path.string() + ": " + e.what());
  }
  if (!doc.contains("schema_version") || doc["schema_version"].get<int>() != 1)
    throw Error(path.string() + ": missing or unsupported schema_version (expected 1)");
  return doc;
}

// Parallel branches are merged into one equivalent susceptance.
std::map<std::pair<int, int>, double> merged_branches(const NetworkCase& c) {
  std::map<std::pair<int, int>, double> merged;
  for (const auto& br : c.branches) {
    auto key = std::minmax(br.from_bus, br.to_bus);
    merged[{key.first, key.second}] += br.susceptance;
  }
  return merged;
}

}  // namespace

const BusRecord* NetworkCase::find_bus(int id) const {
  for (const auto& b : buses)
    if (b.id == id) return &b;
  return nullptr;
}

const GeneratorRecord* NetworkCase::find_generator(int bus_id) const {
  for (const auto& g : generators)
    if (g.bus_id == bus_id) return &g;
  return nullptr;
}

double NetworkCase::total_load_mw() const {
  double total = 0.0;
  for (const auto& b : buses) total += b.load_mw;
  return total;
}

void validate(const NetworkCase& c) {
  if (c.nominal_freq <= 0) throw Error("nominal_freq_hz must be positive");
  std::set<int> ids;
  int n_gen_buses = 0;
  for (const auto& b : c.buses) {
    if (!ids.insert(b.id).second)
      throw Error("duplicate bus id " + std::to_string(b.id));
    if (!(b.v_mag > 0))
      throw Error("bus " + std::to_string(b.id) + ": v_mag_pu must be positive");
    if (!std::isfinite(b.v_mag) || !std::isfinite(b.v_ang))
      throw Error("bus " + std::to_string(b.id) + ": non-finite voltage");
    if (b.kind == BusKind::generator) ++n_gen_buses;
  }
  for (const auto& br : c.branches) {
    if (br.from_bus == br.to_bus)
      throw Error("branch " + std::to_string(br.from_bus) + "-" +
                  std::to_string(br.to_bus) + ": from and to coincide");
    if (!std::isfinite(br.susceptance) || br.susceptance == 0.0)
      throw Error("branch " + std::to_string(br.from_bus) + "-" +
                  std::to_string(br.to_bus) + ": b_pu must be finite and nonzero");
    if (!ids.count(br.from_bus) || !ids.count(br.to_bus))
      throw Error("branch " + std::to_string(br.from_bus) + "-" +
                  std::to_string(br.to_bus) + " references unknown bus");
  }
  if (n_gen_buses < 2) throw Error("case needs at least 2 generator buses");
  std::set<int> gen_bus_seen;
  for (const auto& g : c.generators) {
    const BusRecord* b = c.find_bus(g.bus_id);
    if (!b) throw Error("generator at unknown bus " + std::to_string(g.bus_id));
    if (b->kind != BusKind::generator)
      throw Error("generator at bus " + std::to_string(g.bus_id) +
                  " but bus kind is load");
    if (!(g.inertia_h > 0))
      throw Error("generator at bus " + std::to_string(g.bus_id) +
                  ": h_s must be positive");
    if (!gen_bus_seen.insert(g.bus_id).second)
      throw Error("multiple generator records at bus " + std::to_string(g.bus_id));
  }
  for (const auto& b : c.buses)
    if (b.kind == BusKind::generator && !gen_bus_seen.count(b.id))
      throw Error("generator bus " + std::to_string(b.id) +
                  " has no generator record");

  // connectivity of the branch graph
  if (c.buses.empty()) throw Error("case has no buses");
  std::map<int, std::vector<int>> adj;
  for (const auto& br : c.branches) {
    adj[br.from_bus].push_back(br.to_bus);
    adj[br.to_bus].push_back(br.from_bus);
  }
  std::set<int> seen;
  std::vector<int> stack{c.buses.front().id};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (!seen.insert(v).second) continue;
    for (int w : adj[v]) stack.push_back(w);
  }
  if (seen.size() != ids.size()) {
    std::ostringstream os;
    os << "branch graph is disconnected; unreachable buses:";
    for (int id : ids)
      if (!seen.count(id)) os << " " << id;
    throw Error(os.str());
  }
}

NetworkCase load_case(const std::filesystem::path& path) {
  json doc = read_document(path);
  NetworkCase c;
  try {
    c.nominal_freq = doc.at("nominal_freq_hz").get<double>();
    for (const auto& jb : doc.at("buses")) {
      BusRecord b;
      b.id = jb.at("id").get<int>();
      const std::string kind = jb.at("kind").get<std::string>();
      if (kind == "generator")
        b.kind = BusKind::generator;
      else if (kind == "load")
        b.kind = BusKind::load;
      else
        throw Error("bus " + std::to_string(b.id) + ": unknown kind '" + kind + "'");
      b.v_mag = jb.at("v_mag_pu").get<double>();
      b.v_ang = jb.at("v_ang_rad").get<double>();
      b.load_mw = jb.value("load_mw", 0.0);
      c.buses.push_back(b);
    }
    for (const auto& jb : doc.at("branches")) {
      BranchRecord br;
      br.from_bus = jb.at("from").get<int>();
      br.to_bus = jb.at("to").get<int>();
      br.susceptance = jb.at("b_pu").get<double>();
      c.branches.push_back(br);
    }
    for (const auto& jg : doc.at("generators")) {
      GeneratorRecord g;
      g.bus_id = jg.at("bus").get<int>();
      g.inertia_h = jg.at("h_s").get<double>();
      g.rating_mva = jg.value("rating_mva", 0.0);
      g.tech = parse_tech(jg.value("tech", std::string("synchronous")));
      c.generators.push_back(g);
    }
  } catch (const json::exception& e) {
    throw Error("case schema error in " + path.string() + ": " + e.what());
  }
  validate(c);
  return c;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  json doc = read_document(path);
  ScenarioSpec s;
  try {
    for (const auto& jr : doc.value("replacements", json::array())) {
      Replacement r;
      r.bus_id = jr.at("bus").get<int>();
      r.inertia_h = jr.at("h_s").get<double>();
      r.tech = parse_tech(jr.value("tech", std::string("dfig_wtg")));
      s.replacements.push_back(r);
    }
    for (const auto& ja : doc.value("additions", json::array())) {
      Addition a;
      a.bus_id = ja.at("bus").get<int>();
      a.rating_mw = ja.at("rating_mw").get<double>();
      a.inertia_h = ja.at("h_s").get<double>();
      a.tech = parse_tech(ja.value("tech", std::string("dfig_wtg")));
      s.additions.push_back(a);
    }
    const std::string lr = doc.value("load_redistribution", std::string("none"));
    if (lr == "none")
      s.load_redistribution = LoadRedistribution::none;
    else if (lr == "uniform")
      s.load_redistribution = LoadRedistribution::uniform;
    else
      throw Error("unknown load_redistribution '" + lr + "'");
  } catch (const json::exception& e) {
    throw Error("scenario schema error in " + path.string() + ": " + e.what());
  }
  return s;
}

NetworkCase apply_scenario(const NetworkCase& base, const ScenarioSpec& spec) {
  NetworkCase out = base;
  for (const auto& r : spec.replacements) {
    bool found = false;
    for (auto& g : out.generators) {
      if (g.bus_id == r.bus_id) {
        g.inertia_h = r.inertia_h;
        g.tech = r.tech;
        found = true;
      }
    }
    if (!found)
      throw Error("replacement at bus " + std::to_string(r.bus_id) +
                  ": no generator there");
  }
  for (const auto& a : spec.additions) {
    BusRecord* bus = nullptr;
    for (auto& b : out.buses)
      if (b.id == a.bus_id) bus = &b;
    if (!bus) throw Error("addition at unknown bus " + std::to_string(a.bus_id));
    if (out.find_generator(a.bus_id))
      throw Error("addition at bus " + std::to_string(a.bus_id) +
                  ": bus already hosts a generator");
    bus->kind = BusKind::generator;
    GeneratorRecord g;
    g.bus_id = a.bus_id;
    g.inertia_h = a.inertia_h;
    g.rating_mva = a.rating_mw;
    g.tech = a.tech;
    out.generators.push_back(g);
    if (spec.load_redistribution == LoadRedistribution::uniform) {
      std::vector<BusRecord*> load_buses;
      for (auto& b : out.buses)
        if (b.kind == BusKind::load) load_buses.push_back(&b);
      if (!load_buses.empty()) {
        const double offset = a.rating_mw / double(load_buses.size());
        for (auto* b : load_buses) b->load_mw -= offset;
      }
    }
  }
  validate(out);
  return out;
}

double sync_coefficient(const NetworkCase& c, int i, int j) {
  const BusRecord* bi = c.find_bus(i);
  const BusRecord* bj = c.find_bus(j);
  if (!bi) throw Error("sync_coefficient: unknown bus " + std::to_string(i));
  if (!bj) throw Error("sync_coefficient: unknown bus " + std::to_string(j));
  const auto merged = merged_branches(c);
  auto coupling = [&](const BusRecord& a, const BusRecord& b, double susc) {
    return a.v_mag * b.v_mag * susc * std::cos(a.v_ang - b.v_ang);
  };
  if (i != j) {
    auto key = std::minmax(i, j);
    auto it = merged.find({key.first, key.second});
    if (it == merged.end()) return 0.0;
    return -coupling(*bi, *bj, it->second);
  }
  double diag = 0.0;
  for (const auto& [key, susc] : merged) {
    int other = -1;
    if (key.first == i) other = key.second;
    if (key.second == i) other = key.first;
    if (other < 0) continue;
    diag += coupling(*bi, *c.find_bus(other), susc);
  }
  return diag;
}

PartitionedLaplacian build_laplacian(const NetworkCase& c) {
  std::vector<int> gens, loads;
  for (const auto& b : c.buses)
    (b.kind == BusKind::generator ? gens : loads).push_back(b.id);
  std::sort(gens.begin(), gens.end());
  std::sort(loads.begin(), loads.end());

  std::vector<int> order = gens;
  order.insert(order.end(), loads.begin(), loads.end());
  std::map<int, Eigen::Index> idx;
  for (Eigen::Index i = 0; i < Eigen::Index(order.size()); ++i)
    idx[order[i]] = i;

  const Eigen::Index n = Eigen::Index(order.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [key, susc] : merged_branches(c)) {
    const BusRecord* a = c.find_bus(key.first);
    const BusRecord* b = c.find_bus(key.second);
    const double p = a->v_mag * b->v_mag * susc * std::cos(a->v_ang - b->v_ang);
    const Eigen::Index i = idx[key.first];
    const Eigen::Index j = idx[key.second];
    l(i, j) -= p;
    l(j, i) -= p;
    l(i, i) += p;
    l(j, j) += p;
  }

  const Eigen::Index ng = Eigen::Index(gens.size());
  PartitionedLaplacian pl;
  pl.p_gg = l.topLeftCorner(ng, ng);
  pl.p_gk = l.topRightCorner(ng, n - ng);
  pl.p_kg = l.bottomLeftCorner(n - ng, ng);
  pl.p_kk = l.bottomRightCorner(n - ng, n - ng);
  pl.gen_order = gens;
  pl.load_order = loads;
  return pl;
}

}  // namespace izone
