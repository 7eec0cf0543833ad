#pragma once

#include <iosfwd>
#include <map>
#include <set>

#include "camnet/runtime.hpp"
#include "camnet/scenario.hpp"

namespace camnet {

// Disjoint observation sets keyed by label; the union covers every evaluated
// observation (global indices).
using Partition = std::map<Label, std::set<long>, LabelBefore>;

// Groups kept records by argmax label. Gated (dropped) observations are
// excluded and reported separately by the caller.
Partition estimated_partition(const LabelingResult& result);

// Groups trace records by ground-truth label, restricted to the given global
// indices (pass the estimated partition's coverage so both sides score the
// same observation set).
Partition truth_partition(const Trace& trace, const std::set<long>& include);

// Number of distinct argmax labels over kept records.
int estimated_count(const LabelingResult& result);

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
  int estimated_k = 0;
};

// Trajectory fidelity/completeness: each estimated set is matched to its best
// overlapping truth set, averaged over the estimated sets; F is the harmonic
// mean. Both partitions must cover the same observations.
Metrics precision_recall_f(const Partition& estimated, const Partition& truth);

// CSV: one row per kept observation in time order, one column per label ever
// seen in any support, cells are posterior probabilities at 12 significant
// digits, plus a ground-truth column when the trace is labeled.
void write_belief_matrix(const LabelingResult& result, const Trace& trace, std::ostream& out);

struct SweepRow {
  int count = 0;
  int order = 0;
  int trials = 0;
  double mean_f = 0.0;
};

struct SweepInputs {
  Topology topology;
  ScenarioSpec scenario;
  InferenceConfig inference;
  double bandwidth = 4.0;
  double lambda0 = 0.02;
};

// Deletion-robustness sweep: per trial, learn models on a freshly generated
// training trace, then score each (deletion count, neighborhood order) cell
// on an evaluation trace with that many observations removed. Rows report the
// mean F over trials, one row per (count, order).
std::vector<SweepRow> missing_sweep(const SweepInputs& inputs, const std::vector<int>& counts,
                                    const std::vector<int>& orders, int trials);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace camnet
