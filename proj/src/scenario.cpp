#include "camnet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

namespace camnet {

namespace {

constexpr double kMinDwell = 1e-3;

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt_a, std::uint64_t salt_b) {
  std::uint64_t state = seed;
  state ^= splitmix64(state) + salt_a;
  state ^= splitmix64(state) + (salt_b << 1);
  return splitmix64(state);
}

Rng::Rng(std::uint64_t seed) : state_(seed) {
  // Burn a few steps so small seeds decorrelate immediately.
  for (int i = 0; i < 4; ++i) splitmix64(state_);
}

Rng::Rng(std::uint64_t seed, std::uint64_t salt_a, std::uint64_t salt_b)
    : Rng(mix_seed(seed, salt_a, salt_b)) {}

std::uint64_t Rng::next() { return splitmix64(state_); }

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::pick(const std::vector<double>& probs) {
  const double r = uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (r < acc) return static_cast<int>(i);
  }
  return -1;
}

namespace {

double mean_channel_l1(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().rowwise().sum().mean();
}

Eigen::MatrixXd random_histogram(Rng& rng, int channels, int bins) {
  Eigen::MatrixXd h(channels, bins);
  for (int c = 0; c < channels; ++c) {
    double total = 0.0;
    for (int b = 0; b < bins; ++b) {
      const double g = -std::log(1.0 - rng.uniform());  // flat Dirichlet component
      h(c, b) = g;
      total += g;
    }
    h.row(c) /= total;
  }
  return h;
}

std::vector<ObjectSpec> resolve_objects(const ScenarioSpec& spec, const Topology& topo) {
  std::vector<ObjectSpec> objects = spec.objects;
  for (const ObjectSpec& o : objects) {
    if (o.base_appearance.rows() != spec.channels || o.base_appearance.cols() != spec.bins) {
      throw ConfigError("object " + std::to_string(o.identity) +
                        " base appearance shape does not match scenario channels/bins");
    }
    if (!histogram_normalized(o.base_appearance)) {
      throw ConfigError("object " + std::to_string(o.identity) +
                        " base appearance rows must sum to 1");
    }
  }
  if (spec.auto_objects) {
    const AutoObjects& gen = *spec.auto_objects;
    if (gen.count < 1) throw ConfigError("auto object count must be >= 1");
    if (!(gen.birth_end >= gen.birth_start)) throw ConfigError("birth window is reversed");
    for (int i = 0; i < gen.count; ++i) {
      const int identity = static_cast<int>(objects.size()) + 1;
      Rng rng(spec.seed, 0x6f626au /* "obj" */, static_cast<std::uint64_t>(identity));
      ObjectSpec o;
      o.identity = identity;
      o.birth_camera = static_cast<CameraId>(rng.next() % static_cast<std::uint64_t>(topo.num_cameras()));
      o.birth_time = gen.birth_start + rng.uniform() * (gen.birth_end - gen.birth_start);
      o.visits = gen.visits;
      for (int attempt = 0;; ++attempt) {
        o.base_appearance = random_histogram(rng, spec.channels, spec.bins);
        const bool separated = std::all_of(
            objects.begin(), objects.end(), [&](const ObjectSpec& other) {
              return mean_channel_l1(other.base_appearance, o.base_appearance) >=
                     gen.min_separation;
            });
        if (separated) break;
        if (attempt > 200) {
          throw ConfigError("cannot place " + std::to_string(gen.count) +
                            " base appearances with separation " +
                            std::to_string(gen.min_separation));
        }
      }
      objects.push_back(std::move(o));
    }
  }
  if (objects.empty()) throw ConfigError("scenario defines no objects");
  return objects;
}

Eigen::MatrixXd distort_histogram(const Eigen::MatrixXd& base, const SiteCondition& cond,
                                  Rng& rng) {
  const Eigen::Index channels = base.rows();
  const Eigen::Index bins = base.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(channels, bins);
  for (Eigen::Index c = 0; c < channels; ++c) {
    const double gain = cond.gain.size() > 0 ? cond.gain(c) : 1.0;
    const double shift = cond.shift.size() > 0 ? cond.shift(c) : 0.0;
    for (Eigen::Index b = 0; b < bins; ++b) {
      const auto target = static_cast<Eigen::Index>(std::clamp(
          std::llround(gain * static_cast<double>(b) + shift), 0LL, static_cast<long long>(bins - 1)));
      out(c, target) += base(c, b);
    }
  }
  if (cond.noise > 0.0) {
    for (Eigen::Index c = 0; c < channels; ++c) {
      for (Eigen::Index b = 0; b < bins; ++b) {
        out(c, b) = std::max(0.0, out(c, b) + cond.noise * rng.normal());
      }
      const double total = out.row(c).sum();
      if (total > 0.0) {
        out.row(c) /= total;
      } else {
        out.row(c).setConstant(1.0 / static_cast<double>(bins));
      }
    }
  }
  return out;
}

struct RawObservation {
  int identity;
  CameraId camera;
  SpatioTemporalObs st;
  Eigen::MatrixXd histogram;
};

}  // namespace

Trace generate_trace(const ScenarioSpec& spec, const Topology& topo) {
  if (spec.channels < 1 || spec.bins < 2) throw ConfigError("need >= 1 channel and >= 2 bins");
  if (spec.travel_noise_scale < 0.0) throw ConfigError("travel noise scale must be >= 0");
  std::vector<DwellModel> dwell = spec.dwell;
  if (dwell.empty()) dwell.assign(static_cast<std::size_t>(topo.num_cameras()), DwellModel{});
  if (dwell.size() == 1) dwell.assign(static_cast<std::size_t>(topo.num_cameras()), dwell[0]);
  if (static_cast<int>(dwell.size()) != topo.num_cameras()) {
    throw ConfigError("dwell model count does not match camera count");
  }

  const std::vector<ObjectSpec> objects = resolve_objects(spec, topo);
  std::vector<RawObservation> raw;

  for (const ObjectSpec& object : objects) {
    if (!topo.has_camera(object.birth_camera)) {
      throw ConfigError("object " + std::to_string(object.identity) +
                        " born at unknown camera " + std::to_string(object.birth_camera));
    }
    if (object.visits > 1 && topo.adjacent(object.birth_camera).empty() &&
        topo.num_cameras() > 1) {
      throw DataError("object " + std::to_string(object.identity) +
                      " placed at isolated camera " + std::to_string(object.birth_camera) +
                      " with more than one visit");
    }
    if (object.visits > 1 && topo.num_cameras() == 1) {
      throw DataError("object " + std::to_string(object.identity) +
                      " cannot make " + std::to_string(object.visits) +
                      " visits in a single-camera network");
    }

    Rng rng(spec.seed, 0x77616c6bu /* "walk" */, static_cast<std::uint64_t>(object.identity));
    CameraId camera = object.birth_camera;
    Timestamp t_en = object.birth_time;
    const CameraParams& birth_cam = topo.cameras[static_cast<std::size_t>(camera)];
    BorderId e_en = static_cast<BorderId>(rng.next() %
                                          static_cast<std::uint64_t>(birth_cam.num_borders));

    for (int visit = 0;; ++visit) {
      const CameraParams& cam = topo.cameras[static_cast<std::size_t>(camera)];
      const DwellModel& dm = dwell[static_cast<std::size_t>(camera)];
      double stay = dm.std > 0.0 ? dm.mean + dm.std * rng.normal() : dm.mean;
      stay = std::max(kMinDwell, std::abs(stay));
      const Timestamp t_le = t_en + stay;

      std::vector<double> exit_row(static_cast<std::size_t>(cam.num_borders));
      for (int b = 0; b < cam.num_borders; ++b) exit_row[static_cast<std::size_t>(b)] = cam.traversal(e_en, b);
      const int e_le = rng.pick(exit_row);
      if (e_le < 0) throw std::logic_error("traversal row did not sum to 1");

      RawObservation obs;
      obs.identity = object.identity;
      obs.camera = camera;
      obs.st = SpatioTemporalObs{t_en, e_en, t_le, static_cast<BorderId>(e_le)};
      obs.histogram = distort_histogram(object.base_appearance, cam.condition, rng);
      raw.push_back(std::move(obs));

      if (object.visits > 0 && visit + 1 >= object.visits) break;

      const std::vector<CameraId>& adj = topo.adjacent(camera);
      std::vector<double> move(adj.size());
      for (std::size_t i = 0; i < adj.size(); ++i) {
        move[i] = topo.edge(camera, adj[i]).transition_prob;
      }
      const int choice = rng.pick(move);
      if (choice < 0) break;  // region exit
      const CameraId next = adj[static_cast<std::size_t>(choice)];
      const EdgeParams& e = topo.edge(camera, next);

      const double sigma = spec.travel_noise_scale * std::sqrt(e.travel_var);
      double g = e.mean_travel - e.min_travel;
      if (sigma > 0.0) {
        do {
          g = (e.mean_travel - e.min_travel) + sigma * rng.normal();
        } while (g == 0.0);
      }
      const double travel = e.min_travel + std::abs(g);

      std::vector<double> border_row(static_cast<std::size_t>(e.border_matrix.cols()));
      for (Eigen::Index b = 0; b < e.border_matrix.cols(); ++b) {
        border_row[static_cast<std::size_t>(b)] = e.border_matrix(e_le, b);
      }
      const int entry = rng.pick(border_row);
      if (entry < 0) throw std::logic_error("border matrix row did not sum to 1");

      camera = next;
      t_en = t_le + travel;
      e_en = static_cast<BorderId>(entry);
    }
  }

  // Local indices follow per-camera entry order, then a global sort fixes the
  // canonical event order and global indices.
  std::vector<std::size_t> order(raw.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tuple(raw[a].camera, raw[a].st.t_en, raw[a].identity) <
           std::tuple(raw[b].camera, raw[b].st.t_en, raw[b].identity);
  });
  std::vector<int> local_index(raw.size(), 0);
  std::map<CameraId, int> counters;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const RawObservation& o = raw[order[i]];
    if (i > 0) {
      const RawObservation& p = raw[order[i - 1]];
      if (p.camera == o.camera && p.st.t_en == o.st.t_en) {
        throw DataError("two observations enter camera " + std::to_string(o.camera) +
                        " at exactly the same time; per-camera entry times must be distinct");
      }
    }
    local_index[order[i]] = ++counters[o.camera];
  }

  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tuple(raw[a].st.t_en, raw[a].camera, local_index[a]) <
           std::tuple(raw[b].st.t_en, raw[b].camera, local_index[b]);
  });

  Trace trace;
  trace.records.reserve(raw.size());
  std::map<int, Label> head;  // object identity -> label of its first observation
  long global = 0;
  for (std::size_t idx : order) {
    const RawObservation& o = raw[idx];
    Observation obs;
    obs.camera = o.camera;
    obs.local_index = local_index[idx];
    obs.appearance = AppearanceObs{o.histogram};
    obs.st = o.st;
    obs.global_index = ++global;
    auto [it, inserted] = head.try_emplace(o.identity, obs.own_label());
    trace.records.push_back(TraceRecord{std::move(obs), it->second});
  }
  return trace;
}

DeletionOutcome inject_missing(const Trace& trace, int count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("deletion count must be >= 0");
  if (count >= static_cast<int>(trace.size()) && count > 0) {
    throw std::invalid_argument("cannot delete every observation");
  }
  if (!trace.labeled()) throw DataError("deletion requires a labeled trace");

  std::vector<std::size_t> indices(trace.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  Rng rng(seed, 0x64656cu /* "del" */);
  for (int k = 0; k < count; ++k) {
    const std::size_t j = static_cast<std::size_t>(k) +
                          static_cast<std::size_t>(rng.next() % (indices.size() - static_cast<std::size_t>(k)));
    std::swap(indices[static_cast<std::size_t>(k)], indices[j]);
  }
  std::vector<bool> drop(trace.size(), false);
  DeletionOutcome out;
  for (int k = 0; k < count; ++k) {
    drop[indices[static_cast<std::size_t>(k)]] = true;
    out.deleted_global.push_back(trace.records[indices[static_cast<std::size_t>(k)]].obs.global_index);
  }
  std::sort(out.deleted_global.begin(), out.deleted_global.end());

  // Surviving trajectories are re-headed: group by the original label, the
  // earliest survivor becomes the new ground truth for the group.
  std::map<Label, Label, LabelBefore> new_head;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (drop[i]) continue;
    const TraceRecord& rec = trace.records[i];
    new_head.try_emplace(*rec.truth, rec.obs.own_label());
  }
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (drop[i]) continue;
    TraceRecord rec = trace.records[i];
    rec.truth = new_head.at(*rec.truth);
    out.trace.records.push_back(std::move(rec));
  }
  return out;
}

std::pair<Trace, Trace> emit_training_split(const Trace& trace, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("training fraction must lie in (0, 1)");
  }
  const auto n_train = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(trace.size())));
  Trace train, eval;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i < n_train) {
      train.records.push_back(trace.records[i]);
    } else {
      TraceRecord rec = trace.records[i];
      rec.truth.reset();
      eval.records.push_back(std::move(rec));
    }
  }
  return {std::move(train), std::move(eval)};
}

}  // namespace camnet
