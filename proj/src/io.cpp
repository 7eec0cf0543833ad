#include "camnet/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace camnet {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const std::string& context) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError("missing field '" + std::string(key) + "' in " + context);
  }
  return *it;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& context) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ConfigError(context + " must be a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols) {
      throw ConfigError(context + " has ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

EdgeParams edge_from_json(const json& j, const std::string& context) {
  EdgeParams e;
  e.min_travel = require(j, "min_travel", context).get<double>();
  e.mean_travel = require(j, "mean_travel", context).get<double>();
  e.travel_var = require(j, "travel_var", context).get<double>();
  e.transition_prob = require(j, "transition_prob", context).get<double>();
  e.border_matrix = matrix_from_json(require(j, "border_matrix", context), context + ".border_matrix");
  return e;
}

json edge_to_json(const EdgeParams& e) {
  return json{{"min_travel", e.min_travel},
              {"mean_travel", e.mean_travel},
              {"travel_var", e.travel_var},
              {"transition_prob", e.transition_prob},
              {"border_matrix", matrix_to_json(e.border_matrix)}};
}

Topology topology_from_json(const json& j) {
  Topology topo;
  const json& cameras = require(j, "cameras", "topology");
  topo.cameras.resize(cameras.size());
  for (const json& cam : cameras) {
    const CameraId id = require(cam, "id", "topology.cameras[]").get<CameraId>();
    if (id < 0 || id >= static_cast<CameraId>(cameras.size())) {
      throw ConfigError("camera ids must be dense 0..N-1; got id " + std::to_string(id));
    }
    const std::string context = "topology.cameras[" + std::to_string(id) + "]";
    CameraParams& params = topo.cameras[static_cast<std::size_t>(id)];
    params.num_borders = require(cam, "borders", context).get<int>();
    params.traversal = matrix_from_json(require(cam, "traversal", context), context + ".traversal");
    if (cam.contains("gain")) params.condition.gain = vector_from_json(cam["gain"]);
    if (cam.contains("shift")) params.condition.shift = vector_from_json(cam["shift"]);
    if (cam.contains("noise")) params.condition.noise = cam["noise"].get<double>();
    if (params.condition.gain.size() == 0 && params.condition.shift.size() > 0) {
      params.condition.gain = Eigen::VectorXd::Ones(params.condition.shift.size());
    }
    if (params.condition.shift.size() == 0 && params.condition.gain.size() > 0) {
      params.condition.shift = Eigen::VectorXd::Zero(params.condition.gain.size());
    }
  }
  for (const json& edge : require(j, "edges", "topology")) {
    const CameraId a = require(edge, "from", "topology.edges[]").get<CameraId>();
    const CameraId b = require(edge, "to", "topology.edges[]").get<CameraId>();
    const std::string context =
        "topology.edges[" + std::to_string(a) + "-" + std::to_string(b) + "]";
    topo.add_edge(a, b, edge_from_json(require(edge, "forward", context), context + ".forward"),
                  edge_from_json(require(edge, "backward", context), context + ".backward"));
  }
  topo.validate();
  return topo;
}

json topology_to_json(const Topology& topo) {
  json cameras = json::array();
  for (CameraId u = 0; u < topo.num_cameras(); ++u) {
    const CameraParams& cam = topo.cameras[static_cast<std::size_t>(u)];
    json c{{"id", u},
           {"borders", cam.num_borders},
           {"traversal", matrix_to_json(cam.traversal)},
           {"noise", cam.condition.noise}};
    if (cam.condition.gain.size() > 0) c["gain"] = vector_to_json(cam.condition.gain);
    if (cam.condition.shift.size() > 0) c["shift"] = vector_to_json(cam.condition.shift);
    cameras.push_back(std::move(c));
  }
  json edges = json::array();
  for (const auto& [key, params] : topo.edges) {
    if (key.first > key.second) continue;  // emit each undirected pair once
    edges.push_back(json{{"from", key.first},
                         {"to", key.second},
                         {"forward", edge_to_json(params)},
                         {"backward", edge_to_json(topo.edge(key.second, key.first))}});
  }
  return json{{"cameras", std::move(cameras)}, {"edges", std::move(edges)}};
}

DwellModel dwell_from_json(const json& j, const std::string& context) {
  DwellModel d;
  d.mean = require(j, "mean", context).get<double>();
  d.std = require(j, "std", context).get<double>();
  if (!(d.mean > 0.0) || d.std < 0.0) throw ConfigError(context + " needs mean > 0 and std >= 0");
  return d;
}

int limit_from_json(const json& j, const std::string& context) {
  if (j.is_string()) return parse_limit(j.get<std::string>());
  if (j.is_number_integer()) {
    const auto v = j.get<long long>();
    if (v <= 0) throw ConfigError(context + " must be positive or \"inf\"");
    return v > kUnbounded ? kUnbounded : static_cast<int>(v);
  }
  throw ConfigError(context + " must be an integer or \"inf\"");
}

std::string resolve_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path) || fs::path(path).is_absolute()) return path;
  if (const char* dir = std::getenv(kConfigDirEnv)) {
    const fs::path candidate = fs::path(dir) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;
}

json load_json_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw DataError(std::string(what) + " file not found: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(std::string(what) + " file " + path + ": " + e.what());
  }
}

json label_to_json(const Label& l) {
  return json{{"camera", l.camera}, {"local_index", l.local_index}, {"head_t_en", l.head_t_en}};
}

Label label_from_json(const json& j, const std::string& context) {
  Label l;
  l.camera = require(j, "camera", context).get<CameraId>();
  l.local_index = require(j, "local_index", context).get<int>();
  l.head_t_en = require(j, "head_t_en", context).get<Timestamp>();
  return l;
}

}  // namespace

int parse_limit(const std::string& text) {
  if (text == "inf" || text == "unlimited") return kUnbounded;
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("limit must be a positive integer or \"inf\", got '" + text + "'");
  }
  if (used != text.size() || v <= 0) {
    throw ConfigError("limit must be a positive integer or \"inf\", got '" + text + "'");
  }
  return v > kUnbounded ? kUnbounded : static_cast<int>(v);
}

ProjectConfig load_config(const std::string& path) {
  const json doc = load_json_file(resolve_path(path), "config");
  ProjectConfig cfg;
  cfg.version = require(doc, "version", "config").get<int>();
  if (cfg.version != 1) throw ConfigError("unsupported config version " + std::to_string(cfg.version));
  cfg.topology = topology_from_json(require(doc, "topology", "config"));

  const json& sc = require(doc, "scenario", "config");
  cfg.scenario.seed = require(sc, "seed", "scenario").get<std::uint64_t>();
  cfg.scenario.channels = require(sc, "channels", "scenario").get<int>();
  cfg.scenario.bins = require(sc, "bins", "scenario").get<int>();
  const json& objects = require(sc, "objects", "scenario");
  if (objects.is_array()) {
    for (const json& o : objects) {
      ObjectSpec spec;
      spec.identity = require(o, "identity", "scenario.objects[]").get<int>();
      spec.birth_time = require(o, "birth_time", "scenario.objects[]").get<double>();
      spec.birth_camera = require(o, "birth_camera", "scenario.objects[]").get<CameraId>();
      spec.visits = require(o, "visits", "scenario.objects[]").get<int>();
      spec.base_appearance =
          matrix_from_json(require(o, "appearance", "scenario.objects[]"), "object appearance");
      cfg.scenario.objects.push_back(std::move(spec));
    }
  } else {
    AutoObjects gen;
    gen.count = require(objects, "count", "scenario.objects").get<int>();
    gen.birth_start = require(objects, "birth_start", "scenario.objects").get<double>();
    gen.birth_end = require(objects, "birth_end", "scenario.objects").get<double>();
    gen.visits = require(objects, "visits", "scenario.objects").get<int>();
    if (objects.contains("min_separation")) {
      gen.min_separation = objects["min_separation"].get<double>();
    }
    cfg.scenario.auto_objects = gen;
  }
  const DwellModel global_dwell = dwell_from_json(require(sc, "dwell", "scenario"), "scenario.dwell");
  cfg.scenario.dwell.assign(static_cast<std::size_t>(cfg.topology.num_cameras()), global_dwell);
  const json& cameras = doc["topology"]["cameras"];
  for (const json& cam : cameras) {
    if (cam.contains("dwell")) {
      const auto id = cam["id"].get<CameraId>();
      cfg.scenario.dwell[static_cast<std::size_t>(id)] =
          dwell_from_json(cam["dwell"], "camera dwell");
    }
  }
  if (sc.contains("travel_noise_scale")) {
    cfg.scenario.travel_noise_scale = sc["travel_noise_scale"].get<double>();
  }
  if (sc.contains("missing")) {
    cfg.scenario.missing_count = require(sc["missing"], "count", "scenario.missing").get<int>();
    if (sc["missing"].contains("seed")) {
      cfg.scenario.missing_seed = sc["missing"]["seed"].get<std::uint64_t>();
    }
  }

  const json& inf = require(doc, "inference", "config");
  cfg.inference.order = require(inf, "order", "inference").get<int>();
  cfg.inference.memory = limit_from_json(require(inf, "memory", "inference"), "inference.memory");
  cfg.inference.cap = limit_from_json(require(inf, "cap", "inference"), "inference.cap");
  cfg.inference.lambda0 = require(inf, "lambda0", "inference").get<double>();
  cfg.bandwidth = require(inf, "beta", "inference").get<double>();
  cfg.lambda0 = cfg.inference.lambda0;
  if (inf.contains("renormalize_truncation")) {
    cfg.inference.renormalize_truncation = inf["renormalize_truncation"].get<bool>();
  }
  if (inf.contains("false_alarm_threshold") && !inf["false_alarm_threshold"].is_null()) {
    cfg.inference.false_alarm_threshold = inf["false_alarm_threshold"].get<double>();
  }
  cfg.inference.validate();

  if (doc.contains("training") && doc["training"].contains("fraction")) {
    cfg.training_fraction = doc["training"]["fraction"].get<double>();
  }
  return cfg;
}

void save_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write trace file " + path);
  for (const TraceRecord& rec : trace.records) {
    const Observation& o = rec.obs;
    json line{{"global_index", o.global_index}, {"camera", o.camera},
              {"local_index", o.local_index},  {"t_en", o.st.t_en},
              {"e_en", o.st.e_en},             {"t_le", o.st.t_le},
              {"e_le", o.st.e_le},             {"histogram", matrix_to_json(o.appearance.histogram)}};
    if (rec.truth) line["truth"] = label_to_json(*rec.truth);
    out << line.dump() << '\n';
  }
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("trace file not found: " + path);
  Trace trace;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError("trace " + path + " line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string context = "trace line " + std::to_string(line_no);
    TraceRecord rec;
    rec.obs.global_index = require(j, "global_index", context).get<long>();
    rec.obs.camera = require(j, "camera", context).get<CameraId>();
    rec.obs.local_index = require(j, "local_index", context).get<int>();
    rec.obs.st.t_en = require(j, "t_en", context).get<double>();
    rec.obs.st.e_en = require(j, "e_en", context).get<BorderId>();
    rec.obs.st.t_le = require(j, "t_le", context).get<double>();
    rec.obs.st.e_le = require(j, "e_le", context).get<BorderId>();
    rec.obs.appearance.histogram =
        matrix_from_json(require(j, "histogram", context), context + ".histogram");
    if (!histogram_normalized(rec.obs.appearance.histogram)) {
      throw DataError(context + ": histogram channels must be normalized");
    }
    if (rec.obs.st.t_le < rec.obs.st.t_en) {
      throw DataError(context + ": leave time precedes entry time");
    }
    if (j.contains("truth")) rec.truth = label_from_json(j["truth"], context + ".truth");
    trace.records.push_back(std::move(rec));
  }
  if (!event_order_valid(trace)) {
    throw DataError("trace " + path + " is not in canonical event order");
  }
  std::map<CameraId, int> last_local;
  for (const TraceRecord& rec : trace.records) {
    auto [it, inserted] = last_local.try_emplace(rec.obs.camera, rec.obs.local_index);
    if (!inserted) {
      if (rec.obs.local_index <= it->second) {
        throw DataError("trace " + path + ": local indices must increase with entry time on camera " +
                        std::to_string(rec.obs.camera));
      }
      it->second = rec.obs.local_index;
    }
  }
  return trace;
}

void save_model(const ModelSet& model, const std::string& path) {
  json transfer = json::array();
  for (const auto& [key, f] : model.appearance.transfer) {
    json map_rows = json::array();
    for (int c = 0; c < f.channels(); ++c) {
      json row = json::array();
      for (int b = 0; b < f.bins(); ++b) row.push_back(f.map(c, b));
      map_rows.push_back(std::move(row));
    }
    transfer.push_back(
        json{{"from", key.first}, {"to", key.second}, {"map", std::move(map_rows)}});
  }
  const json doc{{"version", 1},
                 {"beta", model.appearance.bandwidth},
                 {"lambda0", model.appearance.lambda0},
                 {"topology", topology_to_json(model.topology)},
                 {"transfer", std::move(transfer)},
                 {"notes", model.notes}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file " + path);
  out << doc.dump(2) << '\n';
}

ModelSet load_model(const std::string& path) {
  const json doc = load_json_file(path, "model");
  if (require(doc, "version", "model").get<int>() != 1) {
    throw ConfigError("unsupported model version");
  }
  ModelSet model;
  model.appearance.bandwidth = require(doc, "beta", "model").get<double>();
  model.appearance.lambda0 = require(doc, "lambda0", "model").get<double>();
  model.topology = topology_from_json(require(doc, "topology", "model"));
  for (const json& entry : require(doc, "transfer", "model")) {
    const auto from = require(entry, "from", "model.transfer[]").get<CameraId>();
    const auto to = require(entry, "to", "model.transfer[]").get<CameraId>();
    const json& rows = require(entry, "map", "model.transfer[]");
    TransferFunction f;
    f.map.resize(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(rows.empty() ? 0 : rows[0].size()));
    for (Eigen::Index c = 0; c < f.map.rows(); ++c) {
      for (Eigen::Index b = 0; b < f.map.cols(); ++b) {
        f.map(c, b) = rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)].get<int>();
      }
    }
    model.appearance.transfer[{from, to}] = std::move(f);
  }
  if (doc.contains("notes")) model.notes = doc["notes"].get<std::vector<std::string>>();
  model.appearance.validate();
  return model;
}

void save_result(const LabelingResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write result file " + path);
  for (const ResultRecord& rec : result.records) {
    json line{{"global_index", rec.global_index},
              {"camera", rec.camera},
              {"local_index", rec.local_index},
              {"dropped", rec.dropped}};
    if (!rec.dropped) {
      line["argmax"] = label_to_json(rec.argmax);
      json support = json::array();
      for (const auto& [h, p] : rec.belief.support) {
        json entry = label_to_json(h);
        entry["p"] = p;
        support.push_back(std::move(entry));
      }
      line["belief"] = std::move(support);
    }
    out << line.dump() << '\n';
  }
}

LabelingResult load_result(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("result file not found: " + path);
  LabelingResult result;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = json::parse(line);
    const std::string context = "result line " + std::to_string(line_no);
    ResultRecord rec;
    rec.global_index = require(j, "global_index", context).get<long>();
    rec.camera = require(j, "camera", context).get<CameraId>();
    rec.local_index = require(j, "local_index", context).get<int>();
    rec.dropped = require(j, "dropped", context).get<bool>();
    if (!rec.dropped) {
      rec.argmax = label_from_json(require(j, "argmax", context), context + ".argmax");
      for (const json& entry : require(j, "belief", context)) {
        rec.belief.support.emplace_back(label_from_json(entry, context + ".belief[]"),
                                        require(entry, "p", context + ".belief[]").get<double>());
      }
    } else {
      ++result.dropped_count;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

void save_metrics(const LabelingResult& result, const Trace& trace, const InferenceConfig& cfg,
                  const std::string& path) {
  json node_seconds = json::object();
  for (const auto& [camera, seconds] : result.node_seconds) {
    node_seconds[std::to_string(camera)] = seconds;
  }
  json doc{{"estimated_k", estimated_count(result)},
           {"observations", result.records.size()},
           {"dropped", result.dropped_count},
           {"degenerate", result.degenerate_count},
           {"tau_d_seconds", result.tau_d},
           {"node_seconds", std::move(node_seconds)},
           {"config",
            {{"order", cfg.order},
             {"memory", cfg.memory == kUnbounded ? json("inf") : json(cfg.memory)},
             {"cap", cfg.cap == kUnbounded ? json("inf") : json(cfg.cap)},
             {"lambda0", cfg.lambda0},
             {"renormalize_truncation", cfg.renormalize_truncation},
             {"false_alarm_threshold", cfg.false_alarm_threshold}}}};
  if (trace.labeled()) {
    const Partition est = estimated_partition(result);
    std::set<long> cover;
    for (const auto& [l, s] : est) cover.insert(s.begin(), s.end());
    const Metrics m = precision_recall_f(est, truth_partition(trace, cover));
    doc["precision"] = m.precision;
    doc["recall"] = m.recall;
    doc["f"] = m.f;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write metrics file " + path);
  out << doc.dump(2) << '\n';
}

std::vector<std::map<std::pair<CameraId, int>, double>> parse_belief_matrix(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw DataError("empty belief matrix");
  std::vector<std::pair<CameraId, int>> columns;
  std::stringstream hs(header);
  std::string cell;
  int column = 0;
  while (std::getline(hs, cell, ',')) {
    if (column++ < 2) continue;  // global_index, truth
    const auto sep = cell.find(':');
    if (sep == std::string::npos) throw DataError("malformed belief matrix header cell " + cell);
    columns.emplace_back(std::stoi(cell.substr(0, sep)), std::stoi(cell.substr(sep + 1)));
  }
  std::vector<std::map<std::pair<CameraId, int>, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::map<std::pair<CameraId, int>, double> row;
    column = 0;
    while (std::getline(ls, cell, ',')) {
      const int idx = column++ - 2;
      if (idx < 0) continue;
      const double p = std::stod(cell);
      if (p > 0.0) row[columns[static_cast<std::size_t>(idx)]] = p;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace camnet
