#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "camnet/observation.hpp"
#include "camnet/topology.hpp"

namespace camnet {

struct DwellModel {
  double mean = 2.0;
  double std = 0.2;
};

struct ObjectSpec {
  int identity = 0;
  Eigen::MatrixXd base_appearance;  // channels x bins, rows sum to 1
  Timestamp birth_time = 0.0;
  CameraId birth_camera = 0;
  // Number of camera visits; 0 means walk until the region-exit draw fires.
  int visits = 1;
};

// Deterministic recipe for a batch of random objects.
struct AutoObjects {
  int count = 1;
  double birth_start = 0.0;
  double birth_end = 100.0;
  int visits = 1;
  // Minimum mean-per-channel L1 distance between base appearances.
  double min_separation = 0.0;
};

struct ScenarioSpec {
  std::uint64_t seed = 1;
  int channels = 3;
  int bins = 8;
  std::vector<ObjectSpec> objects;       // explicit objects, and/or
  std::optional<AutoObjects> auto_objects;  // generated ones appended after them
  std::vector<DwellModel> dwell;         // per camera; broadcast if size 1
  // Scales the travel-time sampling std relative to sqrt(edge variance);
  // 0 makes every transit gap exactly the edge mean.
  double travel_noise_scale = 1.0;
  // Deletion control consumed by the generate command.
  int missing_count = 0;
  std::uint64_t missing_seed = 0;
};

// Deterministic stream: mt19937_64 plus explicit uniform/normal transforms so
// traces are byte-identical across standard libraries.
struct Rng {
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::uint64_t salt_a, std::uint64_t salt_b = 0);

  double uniform();  // [0, 1)
  double normal();   // standard normal, one draw per call
  // Index drawn by cumulative probability; -1 when the draw lands in the
  // residual mass beyond the listed probabilities.
  int pick(const std::vector<double>& probs);

  std::uint64_t next();

 private:
  std::uint64_t state_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt_a, std::uint64_t salt_b = 0);

// Random-walk synthesis of the full labeled observation trace for a scenario.
Trace generate_trace(const ScenarioSpec& spec, const Topology& topo);

struct DeletionOutcome {
  Trace trace;
  std::vector<long> deleted_global;
};

// Uniform deletion without replacement; ground-truth labels are recomputed so
// each surviving trajectory's head is its label.
DeletionOutcome inject_missing(const Trace& trace, int count, std::uint64_t seed);

// Time-prefix split: the earliest ceil(fraction * n) records keep their
// labels, the rest are stripped for evaluation runs.
std::pair<Trace, Trace> emit_training_split(const Trace& trace, double fraction);

}  // namespace camnet
