#include "camnet/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <vector>

#include "camnet/learning.hpp"

namespace camnet {

Partition estimated_partition(const LabelingResult& result) {
  Partition part;
  for (const ResultRecord& rec : result.records) {
    if (rec.dropped) continue;
    part[rec.argmax].insert(rec.global_index);
  }
  return part;
}

Partition truth_partition(const Trace& trace, const std::set<long>& include) {
  Partition part;
  for (const TraceRecord& rec : trace.records) {
    if (!include.count(rec.obs.global_index)) continue;
    if (!rec.truth) throw DataError("trace record lacks a ground-truth label");
    part[*rec.truth].insert(rec.obs.global_index);
  }
  return part;
}

int estimated_count(const LabelingResult& result) {
  return static_cast<int>(estimated_partition(result).size());
}

namespace {

std::size_t intersection_size(const std::set<long>& a, const std::set<long>& b) {
  const std::set<long>& small = a.size() <= b.size() ? a : b;
  const std::set<long>& large = a.size() <= b.size() ? b : a;
  std::size_t n = 0;
  for (long x : small) n += large.count(x);
  return n;
}

}  // namespace

Metrics precision_recall_f(const Partition& estimated, const Partition& truth) {
  if (estimated.empty()) throw DataError("empty estimated partition");
  std::set<long> cover_est, cover_truth;
  for (const auto& [l, s] : estimated) cover_est.insert(s.begin(), s.end());
  for (const auto& [l, s] : truth) cover_truth.insert(s.begin(), s.end());
  if (cover_est != cover_truth) {
    throw DataError("estimated and truth partitions cover different observation sets");
  }

  Metrics m;
  m.estimated_k = static_cast<int>(estimated.size());
  for (const auto& [el, eset] : estimated) {
    double best_p = 0.0, best_r = 0.0;
    for (const auto& [tl, tset] : truth) {
      const double overlap = static_cast<double>(intersection_size(eset, tset));
      best_p = std::max(best_p, overlap / static_cast<double>(eset.size()));
      best_r = std::max(best_r, overlap / static_cast<double>(tset.size()));
    }
    m.precision += best_p;
    m.recall += best_r;
  }
  m.precision /= static_cast<double>(m.estimated_k);
  m.recall /= static_cast<double>(m.estimated_k);
  m.f = (m.precision + m.recall) > 0.0
            ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
            : 0.0;
  return m;
}

void write_belief_matrix(const LabelingResult& result, const Trace& trace, std::ostream& out) {
  std::vector<Label> columns;
  for (const ResultRecord& rec : result.records) {
    if (rec.dropped) continue;
    for (const auto& [h, p] : rec.belief.support) columns.push_back(h);
  }
  std::sort(columns.begin(), columns.end(), LabelBefore{});
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());

  std::map<long, Label> truth_by_index;
  for (const TraceRecord& rec : trace.records) {
    if (rec.truth) truth_by_index[rec.obs.global_index] = *rec.truth;
  }

  out << "global_index,truth";
  for (const Label& h : columns) out << ',' << label_id(h);
  out << '\n';
  char cell[40];
  for (const ResultRecord& rec : result.records) {
    if (rec.dropped) continue;
    out << rec.global_index << ',';
    const auto t = truth_by_index.find(rec.global_index);
    if (t != truth_by_index.end()) out << label_id(t->second);
    for (const Label& h : columns) {
      const double p = rec.belief.prob_of(h);
      std::snprintf(cell, sizeof cell, ",%.12g", p);
      out << cell;
    }
    out << '\n';
  }
}

std::vector<SweepRow> missing_sweep(const SweepInputs& inputs, const std::vector<int>& counts,
                                    const std::vector<int>& orders, int trials) {
  if (trials < 1) throw ConfigError("sweep needs at least one trial");
  std::vector<SweepRow> rows;
  for (int count : counts) {
    for (int order : orders) rows.push_back(SweepRow{count, order, trials, 0.0});
  }
  for (int trial = 0; trial < trials; ++trial) {
    ScenarioSpec train_spec = inputs.scenario;
    train_spec.seed = mix_seed(inputs.scenario.seed, 0x747261u /* "tra" */,
                               static_cast<std::uint64_t>(trial));
    ScenarioSpec eval_spec = inputs.scenario;
    eval_spec.seed = mix_seed(inputs.scenario.seed, 0x65766cu /* "evl" */,
                              static_cast<std::uint64_t>(trial));
    const Trace train = generate_trace(train_spec, inputs.topology);
    const Trace eval = generate_trace(eval_spec, inputs.topology);
    const ModelSet model = learn_models(train, inputs.topology, inputs.bandwidth, inputs.lambda0);

    std::size_t row = 0;
    for (int count : counts) {
      const DeletionOutcome reduced = inject_missing(
          eval, count, mix_seed(eval_spec.seed, 0x64656cu, static_cast<std::uint64_t>(count)));
      for (int order : orders) {
        InferenceConfig cfg = inputs.inference;
        cfg.order = order;
        cfg.lambda0 = inputs.lambda0;
        const LabelingResult result =
            run_simulation(model.topology, reduced.trace, cfg, model.appearance);
        const Partition est = estimated_partition(result);
        std::set<long> cover;
        for (const auto& [l, s] : est) cover.insert(s.begin(), s.end());
        const Metrics metrics = precision_recall_f(est, truth_partition(reduced.trace, cover));
        rows[row++].mean_f += metrics.f;
      }
    }
  }
  for (SweepRow& row : rows) row.mean_f /= static_cast<double>(trials);
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "count,order,trials,mean_f\n";
  char cell[40];
  for (const SweepRow& row : rows) {
    std::snprintf(cell, sizeof cell, "%.12g", row.mean_f);
    out << row.count << ',' << row.order << ',' << row.trials << ',' << cell << '\n';
  }
}

}  // namespace camnet
