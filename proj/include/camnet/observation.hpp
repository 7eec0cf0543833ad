#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "camnet/types.hpp"

namespace camnet {

// Per-channel normalized brightness histogram, one row per channel.
struct AppearanceObs {
  Eigen::MatrixXd histogram;

  int channels() const { return static_cast<int>(histogram.rows()); }
  int bins() const { return static_cast<int>(histogram.cols()); }
};

bool histogram_normalized(const Eigen::MatrixXd& histogram, double tol = 1e-9);

// Entry/leave times and frame borders of one FOV transit.
struct SpatioTemporalObs {
  Timestamp t_en = 0.0;
  BorderId e_en = 0;
  Timestamp t_le = 0.0;
  BorderId e_le = 0;
};

struct Observation {
  CameraId camera = -1;
  int local_index = 0;
  AppearanceObs appearance;
  SpatioTemporalObs st;
  // Simulator/evaluator bookkeeping only; nodes never see it.
  long global_index = -1;

  Label own_label() const { return Label{camera, local_index, st.t_en}; }
};

// Discrete distribution over labels: strictly positive probabilities summing
// to one, support sorted oldest label first.
struct Belief {
  std::vector<std::pair<Label, double>> support;

  std::size_t size() const { return support.size(); }
  bool empty() const { return support.empty(); }
  double prob_of(const Label& l) const;
};

bool belief_valid(const Belief& b, double tol = 1e-9);

// Label with maximal probability; exact ties go to the oldest label.
Label belief_argmax(const Belief& b);

// Probabilities proportional to the given nonnegative scores, zero entries
// dropped. Throws DataError("degenerate posterior") when every score is zero.
Belief normalize_scores(std::vector<std::pair<Label, double>> scores);

// One record of the canonical observation trace.
struct TraceRecord {
  Observation obs;
  std::optional<Label> truth;
};

struct Trace {
  std::vector<TraceRecord> records;

  std::size_t size() const { return records.size(); }
  bool labeled() const;
};

// Canonical event order: entry time, then camera, then local index.
bool event_order_valid(const Trace& t);

}  // namespace camnet
