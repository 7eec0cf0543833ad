// camnet command line: generate synthetic scenarios, learn models, run the
// distributed labeling loop, verify it against the reference engines, and
// sweep deletion robustness.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "camnet/io.hpp"
#include "camnet/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerification = 3;

struct RunFlags {
  std::string order;
  std::string memory;
  std::string cap;
  double lambda0 = -1.0;
  double gate = -1.0;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--order", flags.order, "neighborhood order q");
  cmd->add_option("--memory", flags.memory, "memory depth M (integer or \"inf\")");
  cmd->add_option("--cap", flags.cap, "sampling-space cap H (integer or \"inf\")");
  cmd->add_option("--lambda0", flags.lambda0, "new-object likelihood constant");
  cmd->add_option("--gate", flags.gate, "false-alarm evidence threshold");
}

camnet::InferenceConfig effective_config(const camnet::ModelSet& model, const RunFlags& flags) {
  camnet::InferenceConfig cfg;
  cfg.lambda0 = model.appearance.lambda0;
  if (!flags.order.empty()) cfg.order = std::stoi(flags.order);
  if (!flags.memory.empty()) cfg.memory = camnet::parse_limit(flags.memory);
  if (!flags.cap.empty()) cfg.cap = camnet::parse_limit(flags.cap);
  if (flags.lambda0 >= 0.0) cfg.lambda0 = flags.lambda0;
  if (flags.gate >= 0.0) cfg.false_alarm_threshold = flags.gate;
  cfg.validate();
  return cfg;
}

std::vector<int> parse_count_list(const std::string& text) {
  std::vector<int> counts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) counts.push_back(std::stoi(item));
  if (counts.empty()) throw camnet::ConfigError("empty count list");
  return counts;
}

int cmd_generate(const std::string& config_path, const std::string& out_path, long seed,
                 double split) {
  camnet::ProjectConfig cfg = camnet::load_config(config_path);
  if (seed >= 0) cfg.scenario.seed = static_cast<std::uint64_t>(seed);
  camnet::Trace trace = camnet::generate_trace(cfg.scenario, cfg.topology);
  if (cfg.scenario.missing_count > 0) {
    trace = camnet::inject_missing(trace, cfg.scenario.missing_count,
                                   cfg.scenario.missing_seed != 0 ? cfg.scenario.missing_seed
                                                                  : cfg.scenario.seed)
                .trace;
  }
  if (split > 0.0) {
    const auto [train, eval] = camnet::emit_training_split(trace, split);
    const std::filesystem::path base(out_path);
    const auto stem = (base.parent_path() / base.stem()).string();
    const auto ext = base.extension().string();
    camnet::save_trace(train, stem + "_train" + ext);
    camnet::save_trace(eval, stem + "_eval" + ext);
    std::cout << "wrote " << train.size() << " training and " << eval.size()
              << " evaluation observations\n";
  }
  camnet::save_trace(trace, out_path);
  std::cout << "wrote " << trace.size() << " observations to " << out_path << "\n";
  return kExitOk;
}

int cmd_learn(const std::string& config_path, const std::string& trace_path,
              const std::string& out_path) {
  const camnet::ProjectConfig cfg = camnet::load_config(config_path);
  const camnet::Trace trace = camnet::load_trace(trace_path);
  if (!trace.labeled()) throw camnet::DataError("learning requires a labeled trace");
  const camnet::ModelSet model =
      camnet::learn_models(trace, cfg.topology, cfg.bandwidth, cfg.lambda0);
  camnet::save_model(model, out_path);
  for (const std::string& note : model.notes) std::cerr << "camnet: note: " << note << "\n";
  std::cout << "wrote model with " << model.appearance.transfer.size()
            << " transfer functions to " << out_path << "\n";
  return kExitOk;
}

int cmd_run(const std::string& trace_path, const std::string& model_path,
            const std::string& out_dir, const RunFlags& flags) {
  const camnet::Trace trace = camnet::load_trace(trace_path);
  const camnet::ModelSet model = camnet::load_model(model_path);
  const camnet::InferenceConfig cfg = effective_config(model, flags);
  const camnet::LabelingResult result =
      camnet::run_simulation(model.topology, trace, cfg, model.appearance);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  camnet::save_result(result, (dir / "result.jsonl").string());
  {
    std::ofstream matrix(dir / "belief_matrix.csv");
    camnet::write_belief_matrix(result, trace, matrix);
  }
  camnet::save_metrics(result, trace, cfg, (dir / "metrics.json").string());
  std::cout << "labeled " << result.records.size() << " observations, K = "
            << camnet::estimated_count(result) << ", tau_d = " << result.tau_d << " s\n";
  return kExitOk;
}

int cmd_verify(const std::string& trace_path, const std::string& model_path,
               const RunFlags& flags, bool exact) {
  const camnet::Trace trace = camnet::load_trace(trace_path);
  const camnet::ModelSet model = camnet::load_model(model_path);
  const camnet::InferenceConfig cfg = effective_config(model, flags);

  const camnet::LabelingResult distributed =
      camnet::run_simulation(model.topology, trace, cfg, model.appearance);
  const camnet::LabelingResult centralized =
      camnet::centralized_run(model.topology, trace, cfg, model.appearance);
  const double diff = camnet::max_belief_difference(distributed, centralized);
  const bool equivalent = diff < 1e-9;
  std::cout << (equivalent ? "PASS" : "FAIL")
            << " distributed-vs-centralized: max belief diff = " << diff << "\n";

  bool exact_ok = true;
  if (exact) {
    if (static_cast<int>(trace.size()) > camnet::kExactEventCap) {
      std::cout << "SKIP exact-joint comparison: trace longer than "
                << camnet::kExactEventCap << " events\n";
    } else {
      camnet::InferenceConfig unbounded = cfg;
      unbounded.memory = camnet::kUnbounded;
      unbounded.cap = camnet::kUnbounded;
      unbounded.false_alarm_threshold = 0.0;
      const camnet::LabelingResult factorized =
          camnet::run_simulation(model.topology, trace, unbounded, model.appearance);
      const camnet::ExactResult exact_result =
          camnet::exact_joint_run(model.topology, trace, unbounded, model.appearance);
      double max_tv = 0.0;
      for (std::size_t i = 0; i < trace.size(); ++i) {
        max_tv = std::max(max_tv, camnet::tv_distance(factorized.records[i].belief,
                                                      exact_result.marginals[i]));
        if (camnet::belief_argmax(factorized.records[i].belief) !=
            camnet::belief_argmax(exact_result.marginals[i])) {
          exact_ok = false;
        }
      }
      std::cout << (exact_ok ? "PASS" : "FAIL")
                << " factorized-vs-exact argmax, max TV distance = " << max_tv << "\n";
    }
  }
  return equivalent && exact_ok ? kExitOk : kExitVerification;
}

int cmd_sweep(const std::string& config_path, const std::string& counts_text, int trials,
              const std::string& out_path) {
  const camnet::ProjectConfig cfg = camnet::load_config(config_path);
  camnet::SweepInputs inputs{cfg.topology, cfg.scenario, cfg.inference, cfg.bandwidth,
                             cfg.lambda0};
  const std::vector<camnet::SweepRow> rows =
      camnet::missing_sweep(inputs, parse_count_list(counts_text), {0, 1}, trials);
  std::ofstream out(out_path);
  if (!out) throw camnet::DataError("cannot write sweep file " + out_path);
  camnet::write_sweep_csv(rows, out);
  std::cout << "wrote " << rows.size() << " sweep rows to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consistent labeling across a non-overlapping camera network"};
  app.require_subcommand(1);

  std::string config_path, trace_path, model_path, out_path, out_dir, counts;
  long seed = -1;
  double split = 0.0;
  int trials = 10;
  bool exact = false;
  RunFlags flags;

  CLI::App* generate = app.add_subcommand("generate", "synthesize a labeled observation trace");
  generate->add_option("--config", config_path, "scenario config file")->required();
  generate->add_option("--out", out_path, "output trace path")->required();
  generate->add_option("--seed", seed, "override the scenario seed");
  generate->add_option("--split", split, "also write _train/_eval prefix split");

  CLI::App* learn = app.add_subcommand("learn", "fit transfer functions and travel models");
  learn->add_option("--config", config_path, "scenario config file")->required();
  learn->add_option("--trace", trace_path, "labeled training trace")->required();
  learn->add_option("--out", out_path, "output model path")->required();

  CLI::App* run = app.add_subcommand("run", "run distributed labeling over a trace");
  run->add_option("--trace", trace_path, "observation trace")->required();
  run->add_option("--model", model_path, "trained model file")->required();
  run->add_option("--out-dir", out_dir, "output directory")->required();
  add_run_flags(run, flags);

  CLI::App* verify = app.add_subcommand("verify", "compare against the reference engines");
  verify->add_option("--trace", trace_path, "observation trace")->required();
  verify->add_option("--model", model_path, "trained model file")->required();
  verify->add_flag("--exact", exact, "also compare against exact joint enumeration");
  add_run_flags(verify, flags);

  CLI::App* sweep = app.add_subcommand("sweep", "deletion-robustness sweep over q in {0,1}");
  sweep->add_option("--config", config_path, "scenario config file")->required();
  sweep->add_option("--counts", counts, "comma-separated deletion counts")->required();
  sweep->add_option("--trials", trials, "trials per cell");
  sweep->add_option("--out", out_path, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(config_path, out_path, seed, split);
    if (learn->parsed()) return cmd_learn(config_path, trace_path, out_path);
    if (run->parsed()) return cmd_run(trace_path, model_path, out_dir, flags);
    if (verify->parsed()) return cmd_verify(trace_path, model_path, flags, exact);
    if (sweep->parsed()) return cmd_sweep(config_path, counts, trials, out_path);
  } catch (const camnet::ConfigError& e) {
    std::cerr << "camnet: config error: " << e.what() << "\n";
    return kExitData;
  } catch (const camnet::DataError& e) {
    std::cerr << "camnet: data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "camnet: error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
