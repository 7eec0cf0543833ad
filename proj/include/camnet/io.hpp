#pragma once

#include <string>

#include "camnet/evaluation.hpp"
#include "camnet/learning.hpp"

namespace camnet {

// Everything a scenario config file carries. One versioned JSON document
// covering topology, scenario, inference and model defaults.
struct ProjectConfig {
  int version = 1;
  Topology topology;
  ScenarioSpec scenario;
  InferenceConfig inference;
  double bandwidth = 4.0;
  double lambda0 = 0.02;
  double training_fraction = 0.3;
};

// Environment variable naming the default config directory; relative config
// paths are resolved against it when they do not exist locally.
inline constexpr const char* kConfigDirEnv = "CAMNET_CONFIG_DIR";

ProjectConfig load_config(const std::string& path);

// Canonical observation trace: one JSON record per line, canonical event
// order, optional ground-truth labels. Numbers round-trip exactly.
void save_trace(const Trace& trace, const std::string& path);
Trace load_trace(const std::string& path);

void save_model(const ModelSet& model, const std::string& path);
ModelSet load_model(const std::string& path);

// Per-observation labeling records as JSON lines. Timing is intentionally
// not serialized so identical runs produce identical files.
void save_result(const LabelingResult& result, const std::string& path);
LabelingResult load_result(const std::string& path);

// Metrics summary: K, precision/recall/F when truth is available, timing and
// the effective configuration.
void save_metrics(const LabelingResult& result, const Trace& trace,
                  const InferenceConfig& cfg, const std::string& path);

// Parses a belief-matrix CSV back into per-row maps keyed by
// (camera, local_index); used to check the export is faithful at printed
// precision.
std::vector<std::map<std::pair<CameraId, int>, double>> parse_belief_matrix(std::istream& in);

// Accepts a plain integer or "inf"/"unlimited" for M and H style limits.
int parse_limit(const std::string& text);

}  // namespace camnet
