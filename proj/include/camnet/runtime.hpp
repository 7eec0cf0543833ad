#pragma once

#include <deque>
#include <map>
#include <set>
#include <vector>

#include "camnet/inference.hpp"

namespace camnet {

// The single message kind: a node announcing the final belief of one of its
// own observations. Beliefs are never re-announced with different values.
struct Message {
  enum class Kind { BeliefAnnounce };
  Kind kind = Kind::BeliefAnnounce;
  Observation obs;
  Belief belief;
};

struct Dispatch {
  CameraId to = -1;
  Message msg;
};

// Per-camera agent state. Cross-agent data flows only through messages.
struct NodeState {
  CameraId camera = -1;
  std::set<CameraId> neighborhood;  // q-order neighbor set, fixed at startup
  // Per-source ring buffers (self included), each capped at M entries.
  std::map<CameraId, std::deque<SnapshotEntry>> cache;
  InferenceConfig config;
  const AppearanceModel* appearance = nullptr;
  const Topology* topology = nullptr;
  double inference_seconds = 0.0;
  long degenerate_count = 0;
};

struct DetectionOutcome {
  Belief belief;  // empty when dropped
  bool dropped = false;
  bool degenerate = false;
  double evidence = 0.0;
  double inference_seconds = 0.0;
  std::vector<Dispatch> messages;
};

// Inserts an announced (observation, belief) pair into the per-source buffer,
// evicting the oldest entry beyond the memory depth. Duplicate deliveries are
// no-ops; messages from outside the neighborhood are protocol errors.
void deliver(NodeState& state, const Message& msg);

// Handles one detection on this camera: snapshot from the cache, posterior,
// optional false-alarm gate, pruning, self-storage, and one announce per
// q-order neighbor. The cache must already reflect every strictly earlier
// event.
DetectionOutcome on_detection(NodeState& state, const Observation& obs);

struct ResultRecord {
  long global_index = -1;
  CameraId camera = -1;
  int local_index = 0;
  bool dropped = false;
  Label argmax;
  Belief belief;
  double inference_seconds = 0.0;
};

struct LabelingResult {
  std::vector<ResultRecord> records;
  std::map<CameraId, double> node_seconds;
  double tau_d = 0.0;  // max cumulative inference time over nodes
  long dropped_count = 0;
  long degenerate_count = 0;
};

// Processes the event log in canonical global order, delivering all messages
// of event k before event k+1. Deterministic given (events, config, models);
// the timing fields are measurement, not part of that contract.
LabelingResult run_simulation(const Topology& topo, const Trace& events,
                              const InferenceConfig& cfg, const AppearanceModel& appearance);

}  // namespace camnet
