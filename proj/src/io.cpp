#include "ordot/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ordot/error.hpp"

namespace ordot::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  return res.ec == std::errc() && res.ptr == t.data() + t.size();
}

bool parse_int(const std::string& text, int& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  return res.ec == std::errc() && res.ptr == t.data() + t.size();
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string file_safe(const std::string& name) {
  std::string out;
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_';
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

}  // namespace

PredictionSet read_predictions(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("line 1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_fields(line);
  if (header.size() < 4 || trim(header.front()) != "id" || trim(header.back()) != "label") {
    throw ParseError("line 1: header must be id,p0,...,p{N-1},label");
  }
  const std::size_t n = header.size() - 2;
  for (std::size_t c = 0; c < n; ++c) {
    if (trim(header[c + 1]) != "p" + std::to_string(c)) {
      throw ParseError("line 1: expected column p" + std::to_string(c) + ", got '" + header[c + 1] + "'");
    }
  }

  PredictionSet set;
  std::vector<double> flat;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != n + 2) {
      throw ShapeError("line " + std::to_string(line_no) + ": expected " + std::to_string(n + 2) + " fields, got " +
                       std::to_string(fields.size()));
    }
    std::vector<double> probs(n);
    for (std::size_t c = 0; c < n; ++c) {
      if (!parse_double(fields[c + 1], probs[c])) {
        throw ParseError("line " + std::to_string(line_no) + ": bad probability '" + fields[c + 1] + "'");
      }
    }
    int label = 0;
    if (!parse_int(fields.back(), label)) {
      throw ParseError("line " + std::to_string(line_no) + ": bad label '" + fields.back() + "'");
    }
    if (label < 0 || label >= static_cast<int>(n)) {
      throw InvalidClass("line " + std::to_string(line_no) + ": label " + std::to_string(label) + " out of range");
    }
    Histogram h = [&] {
      try {
        return make_histogram(probs, Normalization::kRenormalize);
      } catch (const Error& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }();
    set.ids.push_back(trim(fields.front()));
    set.labels.push_back(label);
    flat.insert(flat.end(), h.values().begin(), h.values().end());
  }
  set.probabilities.resize(static_cast<Eigen::Index>(set.labels.size()), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < set.labels.size(); ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      set.probabilities(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = flat[r * n + c];
    }
  }
  return set;
}

PredictionSet read_predictions(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_predictions(in);
}

void write_predictions(std::ostream& out, const PredictionSet& set) {
  out << "id";
  for (int c = 0; c < set.n_classes(); ++c) out << ",p" << c;
  out << ",label\n";
  for (std::size_t r = 0; r < set.labels.size(); ++r) {
    out << set.ids[r];
    for (int c = 0; c < set.n_classes(); ++c) out << ',' << format_real(set.probabilities(static_cast<Eigen::Index>(r), c));
    out << ',' << set.labels[r] << '\n';
  }
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& field : split_fields(text)) {
    double v = 0.0;
    if (!parse_double(field, v)) throw ParseError("bad number '" + field + "' in '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty number list");
  return out;
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

MetricFamily metric_family_from_json(const json& j, const std::string& path) {
  std::string type;
  if (j.is_string()) {
    type = j.get<std::string>();
  } else if (j.is_object()) {
    if (!j.contains("type") || !j["type"].is_string()) throw ConfigError(path + ".type: required string");
    type = j["type"].get<std::string>();
  } else {
    throw ConfigError(path + ": expected a string or an object");
  }
  try {
    if (type == "linear") return MetricFamily::linear();
    if (type == "step") return MetricFamily::step();
    if (type == "power") return MetricFamily::power(j.is_object() ? get_or(j, "rho", 2.0, path) : 2.0);
    if (type == "huber") return MetricFamily::huber(j.is_object() ? get_or(j, "tau", 1.0, path) : 1.0);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  throw ConfigError(path + ".type: unknown metric family '" + type + "'");
}

LossSpec loss_spec_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  LossSpec spec;
  if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError(path + ".kind: required string");
  try {
    spec.kind = loss_kind_from_string(j["kind"].get<std::string>());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ".kind: " + e.what());
  }
  if (j.contains("family")) spec.family = metric_family_from_json(j["family"], path + ".family");
  if (j.contains("smoothing") && !j["smoothing"].is_null()) {
    const json& s = j["smoothing"];
    const std::string sp = path + ".smoothing";
    require_object(s, sp);
    SmoothingConfig sc;
    sc.xi = get_or(s, "xi", sc.xi, sp);
    sc.eta = get_or(s, "eta", sc.eta, sp);
    sc.tau = get_or(s, "tau", sc.tau, sp);
    const std::string norm = get_or<std::string>(s, "norm", "softmax", sp);
    if (norm == "softmax") {
      sc.unimodal_norm = UnimodalNorm::kSoftmax;
    } else if (norm == "sum") {
      sc.unimodal_norm = UnimodalNorm::kSum;
    } else {
      throw ConfigError(sp + ".norm: expected 'softmax' or 'sum'");
    }
    spec.smoothing = sc;
  }
  if (j.contains("sinkhorn")) {
    const json& s = j["sinkhorn"];
    const std::string sp = path + ".sinkhorn";
    require_object(s, sp);
    spec.sinkhorn.epsilon = get_or(s, "epsilon", spec.sinkhorn.epsilon, sp);
    spec.sinkhorn.max_iters = get_or(s, "max_iters", spec.sinkhorn.max_iters, sp);
    spec.sinkhorn.convergence_tol = get_or(s, "convergence_tol", spec.sinkhorn.convergence_tol, sp);
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return spec;
}

ExperimentConfig experiment_from_json(const json& j) {
  require_object(j, "$");
  for (const char* key : {"data", "runs", "seeds", "output_dir"}) {
    if (!j.contains(key)) throw ConfigError(std::string("$.") + key + ": required");
  }
  ExperimentConfig cfg;

  const json& d = j["data"];
  require_object(d, "$.data");
  cfg.n_train = get_or(d, "n_train", cfg.n_train, "$.data");
  cfg.n_val = get_or(d, "n_val", cfg.n_val, "$.data");
  cfg.data.input_dim = get_or(d, "input_dim", cfg.data.input_dim, "$.data");
  cfg.data.n_classes = get_or(d, "n_classes", cfg.data.n_classes, "$.data");
  cfg.data.noise_inlier = get_or(d, "noise_inlier", cfg.data.noise_inlier, "$.data");
  cfg.data.noise_outlier = get_or(d, "noise_outlier", cfg.data.noise_outlier, "$.data");
  cfg.data.latent_noise = get_or(d, "latent_noise", cfg.data.latent_noise, "$.data");

  if (!j["runs"].is_array()) throw ConfigError("$.runs: expected an array");
  cfg.runs.clear();
  for (std::size_t i = 0; i < j["runs"].size(); ++i) {
    const json& r = j["runs"][i];
    const std::string path = "$.runs[" + std::to_string(i) + "]";
    require_object(r, path);
    RunConfig run;
    run.name = get_or<std::string>(r, "name", "", path);
    if (!r.contains("loss")) throw ConfigError(path + ".loss: required");
    run.train.loss = loss_spec_from_json(r["loss"], path + ".loss");
    if (r.contains("train")) {
      const json& t = r["train"];
      const std::string tp = path + ".train";
      require_object(t, tp);
      run.train.epochs = get_or(t, "epochs", run.train.epochs, tp);
      run.train.batch_size = get_or(t, "batch_size", run.train.batch_size, tp);
      run.train.learning_rate = get_or(t, "learning_rate", run.train.learning_rate, tp);
      run.train.weight_decay = get_or(t, "weight_decay", run.train.weight_decay, tp);
      run.train.plateau_patience = get_or(t, "plateau_patience", run.train.plateau_patience, tp);
      run.train.plateau_factor = get_or(t, "plateau_factor", run.train.plateau_factor, tp);
      run.hidden_dim = get_or(t, "hidden_dim", run.hidden_dim, tp);
      const std::string opt = get_or<std::string>(t, "optimizer", "adam", tp);
      if (opt == "adam") {
        run.train.optimizer = OptimizerKind::kAdam;
      } else if (opt == "sgd") {
        run.train.optimizer = OptimizerKind::kSgd;
      } else {
        throw ConfigError(tp + ".optimizer: expected 'adam' or 'sgd'");
      }
      const std::string act = get_or<std::string>(t, "activation", "relu", tp);
      if (act == "relu") {
        run.activation = Activation::kRelu;
      } else if (act == "tanh") {
        run.activation = Activation::kTanh;
      } else {
        throw ConfigError(tp + ".activation: expected 'relu' or 'tanh'");
      }
      try {
        run.train.validate();
      } catch (const Error& e) {
        throw ConfigError(tp + ": " + e.what());
      }
    }
    cfg.runs.push_back(std::move(run));
  }

  if (!j["seeds"].is_array()) throw ConfigError("$.seeds: expected an array of integers");
  cfg.seeds.clear();
  for (std::size_t i = 0; i < j["seeds"].size(); ++i) {
    if (!j["seeds"][i].is_number_integer()) throw ConfigError("$.seeds[" + std::to_string(i) + "]: expected an integer");
    cfg.seeds.push_back(j["seeds"][i].get<std::uint64_t>());
  }
  if (!j["output_dir"].is_string()) throw ConfigError("$.output_dir: expected a string");
  cfg.output_dir = j["output_dir"].get<std::string>();

  if (j.contains("eval")) {
    const json& e = j["eval"];
    require_object(e, "$.eval");
    cfg.splits = get_or<std::string>(e, "splits", "", "$.eval");
    cfg.tpr_target = get_or(e, "tpr", cfg.tpr_target, "$.eval");
    if (!cfg.splits.empty()) {
      try {
        parse_splits(cfg.splits, cfg.data.n_classes);
      } catch (const Error& ex) {
        throw ConfigError(std::string("$.eval.splits: ") + ex.what());
      }
    }
  }
  try {
    cfg.validate();
  } catch (const Error& ex) {
    throw ConfigError(std::string("$: ") + ex.what());
  }
  return cfg;
}

ExperimentConfig load_experiment(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  ExperimentConfig cfg = experiment_from_json(j);
  const fs::path out(cfg.output_dir);
  if (out.is_relative()) cfg.output_dir = (path.parent_path() / out).lexically_normal().string();
  return cfg;
}

json to_json(const EvalReport& report) {
  json j;
  j["accuracy"] = report.accuracy;
  j["mae"] = report.mae;
  j["qwk"] = report.qwk;
  j["tnr_at_tpr"] = report.tnr_at_tpr;
  j["mean_tnr"] = report.mean_tnr;
  return j;
}

std::string comparison_csv(const ComparisonResult& result) {
  std::ostringstream os;
  os << "run,seeds";
  for (const auto& s : result.split_names) os << ",tnr[" << s << "]";
  os << ",mean_tnr,accuracy,qwk,mae\n";
  for (const auto& row : result.rows) {
    os << row.name << ',' << row.n_seeds;
    for (const auto& s : result.split_names) {
      const auto it = row.tnr_at_tpr.find(s);
      os << ',' << fixed(it == row.tnr_at_tpr.end() ? 0.0 : it->second);
    }
    os << ',' << fixed(row.mean_tnr) << ',' << fixed(row.accuracy) << ',' << fixed(row.qwk) << ',' << fixed(row.mae)
       << '\n';
  }
  return os.str();
}

std::string comparison_text(const ComparisonResult& result) {
  std::vector<std::string> header{"run"};
  for (const auto& s : result.split_names) header.push_back("TNR " + s);
  for (const char* h : {"mean TNR", "acc", "QWK", "MAE"}) header.emplace_back(h);

  std::vector<std::vector<std::string>> cells{header};
  for (const auto& row : result.rows) {
    std::vector<std::string> line{row.name};
    for (const auto& s : result.split_names) {
      const auto it = row.tnr_at_tpr.find(s);
      line.push_back(fixed(100.0 * (it == row.tnr_at_tpr.end() ? 0.0 : it->second), 1) + "%");
    }
    line.push_back(fixed(100.0 * row.mean_tnr, 1) + "%");
    line.push_back(fixed(100.0 * row.accuracy, 1) + "%");
    line.push_back(fixed(row.qwk, 3));
    line.push_back(fixed(row.mae, 3));
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream os;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      if (c) os << " | ";
      os << (c == 0 ? std::left : std::right) << std::setw(static_cast<int>(width[c])) << cells[r][c];
    }
    os << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w;
      os << std::string(total + 3 * (width.size() - 1), '-') << '\n';
    }
  }
  return os.str();
}

std::vector<fs::path> write_experiment_outputs(const ComparisonResult& result, const fs::path& dir,
                                               bool with_history) {
  fs::create_directories(dir);
  std::vector<fs::path> written;

  if (with_history) {
    const fs::path plots = dir / "plots";
    fs::create_directories(plots);
    std::map<std::string, std::ostringstream> histories;
    for (const auto& o : result.outcomes) {
      auto& h = histories[o.run];
      if (h.tellp() == 0) h << "seed,epoch,train_loss,learning_rate,val_accuracy,val_mae,val_qwk,val_mean_tnr\n";
      std::map<std::string, std::ostringstream> series;
      for (const auto& e : o.history) {
        h << o.seed << ',' << e.epoch << ',' << format_real(e.train_loss) << ',' << format_real(e.learning_rate) << ','
          << format_real(e.validation.accuracy) << ',' << format_real(e.validation.mae) << ','
          << format_real(e.validation.qwk) << ',' << format_real(e.validation.mean_tnr) << '\n';
        series["train_loss"] << e.epoch << ',' << format_real(e.train_loss) << '\n';
        series["val_qwk"] << e.epoch << ',' << format_real(e.validation.qwk) << '\n';
        series["val_mae"] << e.epoch << ',' << format_real(e.validation.mae) << '\n';
        series["val_accuracy"] << e.epoch << ',' << format_real(e.validation.accuracy) << '\n';
      }
      for (const char* metric : {"train_loss", "val_qwk", "val_mae", "val_accuracy"}) {
        const fs::path p = plots / (file_safe(o.run) + "_seed" + std::to_string(o.seed) + "_" + metric + ".csv");
        write_file(p, "epoch,value\n" + series[metric].str());
        written.push_back(p);
      }
    }
    for (const auto& row : result.rows) {
      const fs::path p = dir / ("history_" + file_safe(row.name) + ".csv");
      write_file(p, histories[row.name].str());
      written.push_back(p);
    }
  }

  const fs::path csv = dir / "comparison.csv";
  write_file(csv, comparison_csv(result));
  written.push_back(csv);
  const fs::path txt = dir / "comparison.txt";
  write_file(txt, comparison_text(result));
  written.push_back(txt);
  return written;
}

}  // namespace ordot::io
