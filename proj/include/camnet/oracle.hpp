#pragma once

#include "camnet/runtime.hpp"

namespace camnet {

// Sequential single-store reference: identical math to run_simulation, but
// with one global list of announced pairs instead of per-node caches. Used to
// check that the distributed loop computes the same beliefs.
LabelingResult centralized_run(const Topology& topo, const Trace& events,
                               const InferenceConfig& cfg, const AppearanceModel& appearance);

inline constexpr int kExactEventCap = 10;

struct ExactResult {
  // Filtered marginal of each observation's labeling variable, recorded at
  // the step where the observation was inferred.
  std::vector<Belief> marginals;
};

// Exact filtering over the joint label assignment of all variables so far:
// the predecessor pointer is resolved per assignment instead of via the
// product-of-marginals approximation. Enumeration is restricted to the
// recursively grown sampling spaces. Refuses instances beyond the event cap
// and any bounded-memory configuration.
ExactResult exact_joint_run(const Topology& topo, const Trace& events,
                            const InferenceConfig& cfg, const AppearanceModel& appearance);

// 0.5 * sum of absolute probability differences over the union support.
double tv_distance(const Belief& a, const Belief& b);

// Largest absolute per-label probability difference between two results,
// compared record by record. Throws on structural mismatch.
double max_belief_difference(const LabelingResult& a, const LabelingResult& b);

}  // namespace camnet
