#include "camnet/runtime.hpp"

#include <chrono>
#include <iostream>

namespace camnet {

namespace {

void store_entry(NodeState& state, CameraId source, SnapshotEntry entry) {
  auto& buf = state.cache[source];
  for (const SnapshotEntry& e : buf) {
    if (e.obs.camera == entry.obs.camera && e.obs.local_index == entry.obs.local_index) {
      return;  // duplicate delivery
    }
  }
  // Buffers fill in global event order, so the front is always the oldest.
  buf.push_back(std::move(entry));
  while (static_cast<int>(buf.size()) > state.config.memory) buf.pop_front();
}

double elapsed_seconds(std::chrono::steady_clock::time_point from,
                       std::chrono::steady_clock::time_point to) {
  return std::chrono::duration<double>(to - from).count();
}

}  // namespace

void deliver(NodeState& state, const Message& msg) {
  const CameraId source = msg.obs.camera;
  if (source != state.camera && !state.neighborhood.count(source)) {
    throw ProtocolError("camera " + std::to_string(state.camera) +
                        " received a message from non-neighbor camera " + std::to_string(source));
  }
  store_entry(state, source, SnapshotEntry{msg.obs, msg.belief});
}

DetectionOutcome on_detection(NodeState& state, const Observation& obs) {
  if (obs.camera != state.camera) {
    throw ProtocolError("observation for camera " + std::to_string(obs.camera) +
                        " dispatched to node " + std::to_string(state.camera));
  }
  // Collect the pooled neighborhood view; this is data collection, not
  // inference, so it stays outside the timer.
  std::vector<SnapshotEntry> pool;
  for (const auto& [source, buf] : state.cache) pool.insert(pool.end(), buf.begin(), buf.end());
  const NeighborhoodSnapshot snap = make_snapshot(std::move(pool), state.config.memory);

  DetectionOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const PosteriorOutcome post =
      joint_posterior(obs, snap, *state.appearance, *state.topology, state.config);
  out.evidence = post.evidence;
  const bool keep = false_alarm_keep(post.evidence, state.config.false_alarm_threshold);
  if (keep) out.belief = prune_space(marginal_posterior(post.joint), state.config.cap);
  const auto t1 = std::chrono::steady_clock::now();

  out.inference_seconds = elapsed_seconds(t0, t1);
  state.inference_seconds += out.inference_seconds;
  if (!keep) {
    out.dropped = true;
    return out;
  }
  out.degenerate = post.degenerate;
  if (post.degenerate) {
    ++state.degenerate_count;
    std::cerr << "camnet: warning: degenerate posterior at camera " << obs.camera
              << " observation " << obs.local_index << ", declared a new object\n";
  }

  store_entry(state, state.camera, SnapshotEntry{obs, out.belief});
  out.messages.reserve(state.neighborhood.size());
  for (CameraId v : state.neighborhood) {
    out.messages.push_back(Dispatch{v, Message{Message::Kind::BeliefAnnounce, obs, out.belief}});
  }
  return out;
}

LabelingResult run_simulation(const Topology& topo, const Trace& events,
                              const InferenceConfig& cfg, const AppearanceModel& appearance) {
  cfg.validate();
  appearance.validate();
  if (!event_order_valid(events)) throw DataError("event log is not in canonical order");

  std::vector<NodeState> nodes(static_cast<std::size_t>(topo.num_cameras()));
  for (CameraId u = 0; u < topo.num_cameras(); ++u) {
    NodeState& n = nodes[static_cast<std::size_t>(u)];
    n.camera = u;
    n.neighborhood = neighbors(topo, u, cfg.order);
    n.config = cfg;
    n.appearance = &appearance;
    n.topology = &topo;
  }

  LabelingResult result;
  result.records.reserve(events.size());
  for (const TraceRecord& rec : events.records) {
    const Observation& obs = rec.obs;
    if (!topo.has_camera(obs.camera)) {
      throw DataError("trace references unknown camera " + std::to_string(obs.camera));
    }
    NodeState& node = nodes[static_cast<std::size_t>(obs.camera)];
    DetectionOutcome out = on_detection(node, obs);

    ResultRecord row;
    row.global_index = obs.global_index;
    row.camera = obs.camera;
    row.local_index = obs.local_index;
    row.dropped = out.dropped;
    row.inference_seconds = out.inference_seconds;
    if (!out.dropped) {
      row.belief = out.belief;
      row.argmax = belief_argmax(out.belief);
    } else {
      ++result.dropped_count;
    }
    result.records.push_back(std::move(row));

    for (const Dispatch& d : out.messages) {
      deliver(nodes[static_cast<std::size_t>(d.to)], d.msg);
    }
  }

  for (const NodeState& n : nodes) {
    result.node_seconds[n.camera] = n.inference_seconds;
    result.tau_d = std::max(result.tau_d, n.inference_seconds);
    result.degenerate_count += n.degenerate_count;
  }
  return result;
}

}  // namespace camnet
