#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "izone/pipeline.hpp"
#include "izone/sensitivity.hpp"
#include "izone/swing_sim.hpp"

namespace izone::report {

// Effective configuration embedded verbatim in every artifact.
nlohmann::ordered_json config_meta(const RunConfig& cfg);

void write_zones_json(const std::filesystem::path& path,
                      const PipelineResult& p, const RunConfig& cfg);
void write_zones_csv(const std::filesystem::path& path, const PipelineResult& p,
                     const RunConfig& cfg);
void write_zones_svg(const std::filesystem::path& path, const PipelineResult& p,
                     const RunConfig& cfg);

struct SweepRow {
  double h = 0.0;
  int bus_id = 0;
  double dnw = 0.0;
  int zone = 0;
};

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows, const RunConfig& cfg);
void write_sweep_svg(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows, int swept_bus,
                     const RunConfig& cfg);

void write_sensitivity_csv(const std::filesystem::path& path,
                           const std::vector<StudyRow>& rows,
                           const std::vector<int>& gen_order,
                           const RunConfig& cfg);

void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& tr, const RunConfig& cfg);
void write_coherence_json(const std::filesystem::path& path,
                          const DisturbanceSpec& d, const CoherenceScore& score,
                          const RunConfig& cfg);

// machine-readable error document for the error stream
std::string error_document(const std::string& message);

std::string parameter_name(PerturbParameter p);

}  // namespace izone::report
