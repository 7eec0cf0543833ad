#include "camnet/learning.hpp"

#include <algorithm>
#include <map>

#include "camnet/spatiotemporal.hpp"

namespace camnet {

ModelSet learn_models(const Trace& trace, const Topology& topo, double bandwidth,
                      double lambda0) {
  if (!trace.labeled()) throw DataError("learning requires a fully labeled trace");

  // Per-object observation sequences in trace (time) order.
  std::map<Label, std::vector<const Observation*>, LabelBefore> tracks;
  for (const TraceRecord& rec : trace.records) tracks[*rec.truth].push_back(&rec.obs);

  ModelSet model;
  model.topology = topo;
  model.appearance.bandwidth = bandwidth;
  model.appearance.lambda0 = lambda0;

  // Transfer training: every cross-camera pair of same-object observations
  // contributes once per direction.
  std::map<std::pair<CameraId, CameraId>, std::vector<std::pair<AppearanceObs, AppearanceObs>>>
      pair_sets;
  // Travel training: consecutive same-object observations across an edge.
  std::map<std::pair<CameraId, CameraId>, std::vector<double>> transits;

  for (const auto& [label, track] : tracks) {
    for (std::size_t i = 0; i < track.size(); ++i) {
      for (std::size_t j = i + 1; j < track.size(); ++j) {
        const Observation& a = *track[i];
        const Observation& b = *track[j];
        if (a.camera == b.camera) continue;
        pair_sets[{a.camera, b.camera}].push_back({a.appearance, b.appearance});
        pair_sets[{b.camera, a.camera}].push_back({b.appearance, a.appearance});
      }
    }
    for (std::size_t i = 0; i + 1 < track.size(); ++i) {
      const Observation& from = *track[i];
      const Observation& to = *track[i + 1];
      if (topo.has_edge(from.camera, to.camera)) {
        transits[{from.camera, to.camera}].push_back(to.st.t_en - from.st.t_le);
      }
    }
  }

  for (const auto& [key, pairs] : pair_sets) {
    model.appearance.transfer[key] = learn_transfer(pairs);
  }
  for (const auto& [key, params] : topo.edges) {
    auto it = transits.find(key);
    if (it == transits.end() || it->second.size() < 2) {
      model.notes.push_back("edge " + std::to_string(key.first) + "->" +
                            std::to_string(key.second) +
                            ": insufficient data, keeping configured travel priors");
      continue;
    }
    const TravelTimeModel fitted = fit_travel_model(it->second);
    EdgeParams& e = model.topology.edges.at(key);
    e.min_travel = fitted.min_travel;
    e.mean_travel = fitted.mean;
    e.travel_var = fitted.var;
  }
  model.topology.validate();
  model.appearance.validate();
  return model;
}

}  // namespace camnet
