#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "izone/network_model.hpp"
#include "izone/spectral_core.hpp"
#include "izone/zoning.hpp"

namespace izone {

struct RunConfig {
  std::string case_path;
  std::optional<std::string> scenario_path;
  int r = 2;
  double tau = 0.15;
  std::uint64_t seed = 42;
  int max_iter = 100;
  std::string out_dir = ".";
  bool format_json = true;
  bool format_csv = true;
  bool format_svg = true;
};

struct PipelineResult {
  NetworkCase net;
  PartitionedLaplacian pl;
  ReducedDynamics rd;
  EigenSystem es;
  DnwVector dnw;
  FeatureMatrix fm;
  ZoningResult zr;
};

// case ingestion -> Laplacian -> Kron -> eigensystem -> MERW DNW ->
// features -> auto-k weighted kmeans -> SEP/SED
PipelineResult run_pipeline(NetworkCase net, int r, double tau,
                            std::uint64_t seed, int max_iter = 100);

}  // namespace izone
