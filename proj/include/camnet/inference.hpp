#pragma once

#include <Eigen/Dense>
#include <vector>

#include "camnet/appearance.hpp"
#include "camnet/observation.hpp"
#include "camnet/spatiotemporal.hpp"
#include "camnet/topology.hpp"

namespace camnet {

struct InferenceConfig {
  int memory = 20;  // M: most recent neighborhood entries kept, kUnbounded = no limit
  int cap = 15;     // H: belief support cap, kUnbounded = no limit
  int order = 0;    // q: neighborhood order
  double lambda0 = 0.02;
  bool renormalize_truncation = false;
  // Minimum unnormalized evidence to accept an observation; 0 disables the gate.
  double false_alarm_threshold = 0.0;

  void validate() const;
};

// One cached neighborhood item: an observation and its announced belief.
struct SnapshotEntry {
  Observation obs;
  Belief belief;
};

// The memory-bounded neighborhood view used for one inference step, sorted
// newest entry first (reverse canonical event order on ties).
struct NeighborhoodSnapshot {
  std::vector<SnapshotEntry> entries;

  int length() const { return static_cast<int>(entries.size()); }  // L
};

NeighborhoodSnapshot make_snapshot(std::vector<SnapshotEntry> entries, int memory);

// The candidate labels of the current observation: its own label plus the
// union of the snapshot belief supports, sorted oldest first.
std::vector<Label> sampling_space(const Label& own, const NeighborhoodSnapshot& snap);

// Predictive label distribution: 1/(L+1) for the own label, and the averaged
// neighborhood belief mass for every inherited label.
Belief label_prior(const Label& own, const NeighborhoodSnapshot& snap);

// Predictive distribution of the predecessor pointer given label h, as a
// vector indexed 0..L. Entry 0 is "no predecessor in view". Sums to one by a
// telescoping identity.
Eigen::VectorXd pointer_prior(const Label& h, const NeighborhoodSnapshot& snap);

// Log evidence per pointer value: log lambda0 at index 0, log of the
// appearance x spatio-temporal likelihood against snapshot entry l at l >= 1.
// Impossible entries carry -inf.
Eigen::VectorXd log_likelihood_vector(const Observation& cur, const NeighborhoodSnapshot& snap,
                                      const AppearanceModel& appearance, const Topology& topo,
                                      const InferenceConfig& cfg);

// Normalized joint table over (label, pointer), labels sorted oldest first.
struct JointBelief {
  std::vector<Label> labels;
  Eigen::MatrixXd table;  // labels.size() x (L+1)
};

struct PosteriorOutcome {
  JointBelief joint;
  double evidence = 0.0;  // total unnormalized mass, for the false-alarm gate
  bool degenerate = false;
};

// Bayes update combining likelihoods with the label and pointer priors.
// Weights are combined in log space and normalized after a max shift, so the
// result is invariant to a common positive likelihood scale. When every
// weight is zero the outcome is flagged degenerate with all mass on
// (own label, no predecessor).
PosteriorOutcome posterior_from_log_likelihoods(const Label& own, const NeighborhoodSnapshot& snap,
                                                const Eigen::VectorXd& log_lambda);

PosteriorOutcome joint_posterior(const Observation& cur, const NeighborhoodSnapshot& snap,
                                 const AppearanceModel& appearance, const Topology& topo,
                                 const InferenceConfig& cfg);

// Sums out the pointer variable.
Belief marginal_posterior(const JointBelief& joint);

// Repeatedly removes the lowest-probability label while the support exceeds
// the cap (ties drop the youngest label), then renormalizes.
Belief prune_space(Belief b, int cap);

// Keep when the unnormalized evidence reaches the threshold; >= semantics.
inline bool false_alarm_keep(double evidence, double threshold) {
  return evidence >= threshold;
}

}  // namespace camnet
