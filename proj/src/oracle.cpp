#include "camnet/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

namespace camnet {

LabelingResult centralized_run(const Topology& topo, const Trace& events,
                               const InferenceConfig& cfg, const AppearanceModel& appearance) {
  cfg.validate();
  appearance.validate();
  if (!event_order_valid(events)) throw DataError("event log is not in canonical order");

  std::vector<std::set<CameraId>> hood(static_cast<std::size_t>(topo.num_cameras()));
  for (CameraId u = 0; u < topo.num_cameras(); ++u) hood[static_cast<std::size_t>(u)] = neighbors(topo, u, cfg.order);

  std::vector<SnapshotEntry> store;  // every announced pair, in event order
  LabelingResult result;
  result.records.reserve(events.size());
  for (const TraceRecord& rec : events.records) {
    const Observation& obs = rec.obs;
    if (!topo.has_camera(obs.camera)) {
      throw DataError("trace references unknown camera " + std::to_string(obs.camera));
    }
    const std::set<CameraId>& visible = hood[static_cast<std::size_t>(obs.camera)];
    std::vector<SnapshotEntry> pool;
    for (const SnapshotEntry& e : store) {
      if (e.obs.camera == obs.camera || visible.count(e.obs.camera)) pool.push_back(e);
    }
    const NeighborhoodSnapshot snap = make_snapshot(std::move(pool), cfg.memory);
    const PosteriorOutcome post = joint_posterior(obs, snap, appearance, topo, cfg);

    ResultRecord row;
    row.global_index = obs.global_index;
    row.camera = obs.camera;
    row.local_index = obs.local_index;
    if (false_alarm_keep(post.evidence, cfg.false_alarm_threshold)) {
      row.belief = prune_space(marginal_posterior(post.joint), cfg.cap);
      row.argmax = belief_argmax(row.belief);
      if (post.degenerate) ++result.degenerate_count;
      store.push_back(SnapshotEntry{obs, row.belief});
    } else {
      row.dropped = true;
      ++result.dropped_count;
    }
    result.records.push_back(std::move(row));
  }
  return result;
}

namespace {

struct ExactVariable {
  std::vector<Label> space;          // sampling space, oldest label first
  std::vector<int> snapshot_events;  // event indices visible at inference, newest first
};

int index_in_space(const std::vector<Label>& space, const Label& h) {
  const auto it = std::lower_bound(space.begin(), space.end(), h, LabelBefore{});
  if (it == space.end() || !(*it == h)) return -1;
  return static_cast<int>(it - space.begin());
}

}  // namespace

ExactResult exact_joint_run(const Topology& topo, const Trace& events,
                            const InferenceConfig& cfg, const AppearanceModel& appearance) {
  if (static_cast<int>(events.size()) > kExactEventCap) {
    throw std::invalid_argument("exact joint enumeration is capped at " +
                                std::to_string(kExactEventCap) + " events");
  }
  if (cfg.memory != kUnbounded || cfg.cap != kUnbounded || cfg.false_alarm_threshold != 0.0) {
    throw std::invalid_argument("exact joint enumeration requires no pruning and no gate");
  }
  if (!event_order_valid(events)) throw DataError("event log is not in canonical order");

  std::vector<std::set<CameraId>> hood(static_cast<std::size_t>(topo.num_cameras()));
  for (CameraId u = 0; u < topo.num_cameras(); ++u) hood[static_cast<std::size_t>(u)] = neighbors(topo, u, cfg.order);

  std::vector<ExactVariable> vars;
  // Joint table over value indices per variable; assignments with zero mass
  // are dropped as they appear.
  std::vector<std::pair<std::array<std::int8_t, kExactEventCap>, double>> table;
  table.push_back({{}, 1.0});

  ExactResult out;
  for (int k = 0; k < static_cast<int>(events.size()); ++k) {
    const Observation& cur = events.records[static_cast<std::size_t>(k)].obs;
    const Label own = cur.own_label();
    const std::set<CameraId>& visible = hood[static_cast<std::size_t>(cur.camera)];

    ExactVariable var;
    for (int e = k - 1; e >= 0; --e) {
      const Observation& prev = events.records[static_cast<std::size_t>(e)].obs;
      if (prev.camera == cur.camera || visible.count(prev.camera)) {
        var.snapshot_events.push_back(e);
      }
    }
    std::vector<Label> space{own};
    for (int e : var.snapshot_events) {
      const auto& sp = vars[static_cast<std::size_t>(e)].space;
      space.insert(space.end(), sp.begin(), sp.end());
    }
    std::sort(space.begin(), space.end(), LabelBefore{});
    space.erase(std::unique(space.begin(), space.end()), space.end());
    var.space = std::move(space);

    // Pair likelihood against each visible entry, identical to the
    // factorized engine's evidence.
    const int len = static_cast<int>(var.snapshot_events.size());
    std::vector<double> lambda(static_cast<std::size_t>(len) + 1);
    lambda[0] = cfg.lambda0;
    for (int l = 1; l <= len; ++l) {
      const Observation& prev =
          events.records[static_cast<std::size_t>(var.snapshot_events[static_cast<std::size_t>(l - 1)])].obs;
      lambda[static_cast<std::size_t>(l)] =
          appearance_likelihood(appearance, cur.camera, cur.appearance, prev.camera,
                                prev.appearance) *
          st_likelihood_orderq(topo, cur.camera, cur.st, prev.camera, prev.st, cfg.order,
                               cfg.renormalize_truncation);
    }

    std::vector<std::pair<std::array<std::int8_t, kExactEventCap>, double>> next;
    next.reserve(table.size() * var.space.size());
    const double prior_unit = 1.0 / (static_cast<double>(len) + 1.0);
    for (const auto& [assign, mass] : table) {
      for (int hi = 0; hi < static_cast<int>(var.space.size()); ++hi) {
        const Label& h = var.space[static_cast<std::size_t>(hi)];
        // Under a concrete assignment the pointer is determined: the most
        // recent visible variable already carrying h, if any.
        int matches = 0;
        int first_match = 0;  // 1-based pointer; 0 = new object
        for (int l = 1; l <= len; ++l) {
          const int e = var.snapshot_events[static_cast<std::size_t>(l - 1)];
          const Label& value =
              vars[static_cast<std::size_t>(e)].space[static_cast<std::size_t>(
                  assign[static_cast<std::size_t>(e)])];
          if (value == h) {
            ++matches;
            if (first_match == 0) first_match = l;
          }
        }
        double prior = prior_unit * static_cast<double>(matches);
        if (h == own) prior += prior_unit;
        if (prior == 0.0) continue;
        const double like = lambda[static_cast<std::size_t>(first_match)];
        const double weight = mass * prior * like;
        if (weight == 0.0) continue;
        auto extended = assign;
        extended[static_cast<std::size_t>(k)] = static_cast<std::int8_t>(hi);
        next.push_back({extended, weight});
      }
    }
    double total = 0.0;
    for (const auto& [assign, mass] : next) total += mass;
    if (!(total > 0.0)) {
      // Degenerate step: every weight vanished; force the new-object outcome
      // exactly as the factorized engine does.
      next.clear();
      const int own_idx = index_in_space(var.space, own);
      for (const auto& [assign, mass] : table) {
        auto extended = assign;
        extended[static_cast<std::size_t>(k)] = static_cast<std::int8_t>(own_idx);
        next.push_back({extended, mass});
      }
      total = 0.0;
      for (const auto& [assign, mass] : next) total += mass;
    }
    for (auto& [assign, mass] : next) mass /= total;
    table = std::move(next);
    vars.push_back(std::move(var));

    std::vector<double> marginal(vars.back().space.size(), 0.0);
    for (const auto& [assign, mass] : table) {
      marginal[static_cast<std::size_t>(assign[static_cast<std::size_t>(k)])] += mass;
    }
    Belief b;
    for (std::size_t i = 0; i < marginal.size(); ++i) {
      if (marginal[i] > 0.0) b.support.emplace_back(vars.back().space[i], marginal[i]);
    }
    out.marginals.push_back(std::move(b));
  }
  return out;
}

double tv_distance(const Belief& a, const Belief& b) {
  std::map<Label, double, LabelBefore> diff;
  for (const auto& [h, p] : a.support) diff[h] += p;
  for (const auto& [h, p] : b.support) diff[h] -= p;
  double total = 0.0;
  for (const auto& [h, d] : diff) total += std::abs(d);
  return 0.5 * total;
}

double max_belief_difference(const LabelingResult& a, const LabelingResult& b) {
  if (a.records.size() != b.records.size()) {
    throw DataError("results cover different numbers of observations");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const ResultRecord& ra = a.records[i];
    const ResultRecord& rb = b.records[i];
    if (ra.camera != rb.camera || ra.local_index != rb.local_index || ra.dropped != rb.dropped) {
      throw DataError("results diverge structurally at record " + std::to_string(i));
    }
    if (ra.dropped) continue;
    std::map<Label, double, LabelBefore> diff;
    for (const auto& [h, p] : ra.belief.support) diff[h] += p;
    for (const auto& [h, p] : rb.belief.support) diff[h] -= p;
    for (const auto& [h, d] : diff) worst = std::max(worst, std::abs(d));
  }
  return worst;
}

}  // namespace camnet
