#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "izone/partitioned_laplacian.hpp"

namespace izone {

enum class BusKind { generator, load };
enum class GenTech { synchronous, dfig_wtg };

struct BusRecord {
  int id = 0;
  BusKind kind = BusKind::load;
  double v_mag = 1.0;   // p.u.; internal EMF for generator buses
  double v_ang = 0.0;   // rad, pre-disturbance
  double load_mw = 0.0;
};

struct BranchRecord {
  int from_bus = 0;
  int to_bus = 0;
  double susceptance = 0.0;  // p.u. transfer susceptance, conductance dropped
};

struct GeneratorRecord {
  int bus_id = 0;
  double inertia_h = 0.0;  // machine-base seconds
  double rating_mva = 0.0;
  GenTech tech = GenTech::synchronous;
};

struct NetworkCase {
  double nominal_freq = 60.0;
  std::vector<BusRecord> buses;
  std::vector<BranchRecord> branches;
  std::vector<GeneratorRecord> generators;

  const BusRecord* find_bus(int id) const;
  const GeneratorRecord* find_generator(int bus_id) const;
  double total_load_mw() const;
};

struct Replacement {
  int bus_id = 0;
  double inertia_h = 0.0;
  GenTech tech = GenTech::dfig_wtg;
};

struct Addition {
  int bus_id = 0;
  double rating_mw = 0.0;
  double inertia_h = 0.0;
  GenTech tech = GenTech::dfig_wtg;
};

enum class LoadRedistribution { none, uniform };

struct ScenarioSpec {
  std::vector<Replacement> replacements;
  std::vector<Addition> additions;
  LoadRedistribution load_redistribution = LoadRedistribution::none;
};

// Throws Error naming the offending field on any invariant violation
// (duplicate ids, non-positive H, disconnected graph, ...).
void validate(const NetworkCase& c);

NetworkCase load_case(const std::filesystem::path& path);
ScenarioSpec load_scenario(const std::filesystem::path& path);

// Returns a new case; the base is never modified. Replacements swap the
// generator's inertia/tech in place, additions turn the named bus into a
// generator bus. Uniform load redistribution subtracts the added rating
// evenly from the remaining load buses.
NetworkCase apply_scenario(const NetworkCase& base, const ScenarioSpec& spec);

// Synchronizing power coefficient between buses i and j at the recorded
// operating point. Diagonal entries sum the neighbor couplings.
double sync_coefficient(const NetworkCase& c, int i, int j);

// Full N x N synchronizing-power Laplacian, generator rows/columns first,
// ascending bus id inside each partition.
PartitionedLaplacian build_laplacian(const NetworkCase& c);

}  // namespace izone
