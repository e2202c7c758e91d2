// ordot: command-line front end for the ordinal transport losses.
#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordot/error.hpp"
#include "ordot/exact.hpp"
#include "ordot/experiment.hpp"
#include "ordot/io.hpp"
#include "ordot/loss.hpp"
#include "ordot/metrics.hpp"
#include "ordot/sinkhorn.hpp"
#include "ordot/smoothing.hpp"

namespace {

using nlohmann::json;
using ordot::io::format_real;

struct LossArgs {
  std::string loss = "linear";
  std::string family = "linear";
  double rho = 2.0;
  double huber_tau = 1.0;
  double eps = 0.1;
  std::string s, t, logits, csv;
  std::optional<int> j_star;
  bool smooth = false;
  bool grad = false;
  bool as_json = false;
};

struct SmoothArgs {
  int n = 5;
  int j_star = 0;
  double xi = 0.15;
  double eta = 0.05;
  double tau = 1.0;
  std::string norm = "softmax";
  bool as_json = false;
};

struct EvalArgs {
  std::string preds;
  std::string splits = "0:1-4,0-1:2-4,0-2:3-4";
  double tpr = 0.95;
  bool as_json = false;
};

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_real(v[i]);
  return out;
}

ordot::UnimodalNorm parse_norm(const std::string& name) {
  if (name == "softmax") return ordot::UnimodalNorm::kSoftmax;
  if (name == "sum") return ordot::UnimodalNorm::kSum;
  throw ordot::ConfigError("--norm must be softmax or sum");
}

ordot::MetricFamily family_of(const LossArgs& a) {
  if (a.family == "linear") return ordot::MetricFamily::linear();
  if (a.family == "power") return ordot::MetricFamily::power(a.rho);
  if (a.family == "huber") return ordot::MetricFamily::huber(a.huber_tau);
  if (a.family == "step") return ordot::MetricFamily::step();
  throw ordot::ConfigError("unknown --family '" + a.family + "'");
}

ordot::LossKind kind_of(const std::string& name) {
  using ordot::LossKind;
  if (name == "onehot") return LossKind::kWassersteinOneHot;
  if (name == "linear") return LossKind::kWassersteinLinear;
  if (name == "convex") return LossKind::kWassersteinConvex;
  if (name == "step") return LossKind::kWassersteinStep;
  if (name == "sinkhorn") return LossKind::kSinkhorn;
  if (name == "ce") return LossKind::kCrossEntropy;
  if (name == "sce") return LossKind::kSmoothedCrossEntropy;
  if (name == "regression") return LossKind::kRegression;
  throw ordot::ConfigError("unknown --loss '" + name + "'");
}

// Loss between a prediction histogram and a target, for the five transport kinds.
double transport_loss(const LossArgs& a, const ordot::Histogram& s, const ordot::Histogram& t,
                      std::optional<int> j_star) {
  const ordot::GroundMatrix g(s.n_classes(), family_of(a));
  if (a.loss == "onehot") {
    if (!j_star) throw ordot::ConfigError("--loss onehot needs --j-star (or a CSV label)");
    return ordot::wasserstein_onehot(s, ordot::OneHotLabel(*j_star, s.n_classes()), g);
  }
  if (a.loss == "linear") return ordot::wasserstein_linear(s, t);
  if (a.loss == "convex") return ordot::wasserstein_convex(s, t, g);
  if (a.loss == "step") return ordot::wasserstein_step(s, t);
  if (a.loss == "sinkhorn") {
    ordot::SinkhornConfig cfg;
    cfg.epsilon = a.eps;
    return ordot::sinkhorn_distance(s, t, g, cfg).cost;
  }
  throw ordot::ConfigError("--loss must be onehot, linear, convex, step or sinkhorn without --grad");
}

ordot::Histogram target_for(const LossArgs& a, int j_star, int n) {
  const ordot::OneHotLabel label(j_star, n);
  if (a.smooth) return ordot::smooth_label(label, ordot::SmoothingConfig{});
  return ordot::one_hot(label);
}

int run_loss(const LossArgs& a) {
  if (a.grad) {
    if (a.logits.empty() || !a.j_star) throw ordot::ConfigError("--grad needs --logits and --j-star");
    const auto z = ordot::io::parse_real_list(a.logits);
    ordot::LossSpec spec;
    spec.kind = kind_of(a.loss);
    spec.family = family_of(a);
    spec.sinkhorn.epsilon = a.eps;
    if (a.smooth || spec.kind == ordot::LossKind::kSmoothedCrossEntropy) spec.smoothing = ordot::SmoothingConfig{};
    const auto r = ordot::loss_and_grad(z, ordot::OneHotLabel(*a.j_star, static_cast<int>(z.size())), spec);
    if (a.as_json) {
      std::cout << json{{"value", r.value}, {"grad_logits", r.grad_logits}}.dump() << '\n';
    } else {
      std::cout << format_real(r.value) << '\n' << join(r.grad_logits) << '\n';
    }
    return 0;
  }

  if (!a.csv.empty()) {
    const auto set = ordot::io::read_predictions(std::filesystem::path(a.csv));
    json rows = json::array();
    double mean = 0.0;
    for (std::size_t r = 0; r < set.labels.size(); ++r) {
      std::vector<double> p(static_cast<std::size_t>(set.n_classes()));
      for (int c = 0; c < set.n_classes(); ++c) p[static_cast<std::size_t>(c)] = set.probabilities(static_cast<Eigen::Index>(r), c);
      const auto s = ordot::make_histogram(p, ordot::Normalization::kRenormalize);
      const double v = transport_loss(a, s, target_for(a, set.labels[r], s.n_classes()), set.labels[r]);
      mean += v / static_cast<double>(set.labels.size());
      if (a.as_json) {
        rows.push_back({{"id", set.ids[r]}, {"value", v}});
      } else {
        std::cout << set.ids[r] << ',' << format_real(v) << '\n';
      }
    }
    if (a.as_json) {
      std::cout << json{{"rows", rows}, {"mean", mean}}.dump() << '\n';
    } else {
      std::cout << "mean," << format_real(mean) << '\n';
    }
    return 0;
  }

  if (a.s.empty()) throw ordot::ConfigError("give --s with --t/--j-star, or --csv");
  const auto s = ordot::make_histogram(ordot::io::parse_real_list(a.s), ordot::Normalization::kRenormalize);
  std::optional<ordot::Histogram> t;
  if (!a.t.empty()) {
    t = ordot::make_histogram(ordot::io::parse_real_list(a.t), ordot::Normalization::kRenormalize);
  } else if (a.j_star) {
    t = target_for(a, *a.j_star, s.n_classes());
  } else {
    throw ordot::ConfigError("give a target with --t or --j-star");
  }
  ordot::require_same_size(s, *t);
  const double v = transport_loss(a, s, *t, a.j_star);
  if (a.as_json) {
    std::cout << json{{"value", v}}.dump() << '\n';
  } else {
    std::cout << format_real(v) << '\n';
  }
  return 0;
}

int run_smooth(const SmoothArgs& a) {
  ordot::SmoothingConfig cfg{a.xi, a.eta, a.tau, parse_norm(a.norm)};
  const auto t = ordot::smooth_label(ordot::OneHotLabel(a.j_star, a.n), cfg);
  if (a.as_json) {
    std::cout << json{{"target", t.vector()}}.dump() << '\n';
  } else {
    std::cout << join(t.vector()) << '\n';
  }
  return 0;
}

int run_eval(const EvalArgs& a) {
  const auto set = ordot::io::read_predictions(std::filesystem::path(a.preds));
  const auto splits = ordot::parse_splits(a.splits, set.n_classes());
  const auto report = ordot::evaluate(set.probabilities, set.labels, splits, a.tpr);
  if (a.as_json) {
    std::cout << ordot::io::to_json(report).dump(2) << '\n';
    return 0;
  }
  std::cout << "accuracy " << format_real(report.accuracy) << '\n'
            << "mae " << format_real(report.mae) << '\n'
            << "qwk " << format_real(report.qwk) << '\n';
  for (const auto& s : splits) std::cout << "tnr@tpr[" << s.name << "] " << format_real(report.tnr_at_tpr.at(s.name)) << '\n';
  std::cout << "mean_tnr " << format_real(report.mean_tnr) << '\n';
  return 0;
}

int run_experiment(const std::string& config, bool with_history) {
  const auto cfg = ordot::io::load_experiment(config);
  const auto result = ordot::run_comparison(cfg);
  const auto files = ordot::io::write_experiment_outputs(result, cfg.output_dir, with_history);
  std::cout << ordot::io::comparison_text(result);
  std::cerr << "wrote " << files.size() << " files to " << cfg.output_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact 1-D Wasserstein losses for ordinal classification"};
  app.require_subcommand(1);

  LossArgs loss;
  auto* loss_cmd = app.add_subcommand("loss", "Evaluate a transport loss between histograms");
  loss_cmd->add_option("--loss", loss.loss, "onehot|linear|convex|step|sinkhorn (with --grad also ce|sce|regression)");
  loss_cmd->add_option("--family", loss.family, "linear|power|huber|step");
  loss_cmd->add_option("--rho", loss.rho, "exponent of the power family");
  loss_cmd->add_option("--huber-tau", loss.huber_tau, "Huber threshold");
  loss_cmd->add_option("--eps", loss.eps, "Sinkhorn regularization");
  loss_cmd->add_option("--s", loss.s, "prediction histogram, comma separated");
  loss_cmd->add_option("--t", loss.t, "target histogram, comma separated");
  loss_cmd->add_option("--j-star", loss.j_star, "true class (one-hot or smoothed target)");
  loss_cmd->add_option("--logits", loss.logits, "raw logits for --grad");
  loss_cmd->add_option("--csv", loss.csv, "prediction CSV (id,p0..,label)");
  loss_cmd->add_flag("--smooth", loss.smooth, "use the unimodal-uniform smoothed target with default weights");
  loss_cmd->add_flag("--grad", loss.grad, "print the gradient with respect to --logits");
  loss_cmd->add_flag("--json", loss.as_json, "JSON output");

  SmoothArgs smooth;
  auto* smooth_cmd = app.add_subcommand("smooth", "Print a unimodal-uniform smoothed target");
  smooth_cmd->add_option("--n", smooth.n, "number of classes")->required();
  smooth_cmd->add_option("--j-star", smooth.j_star, "true class")->required();
  smooth_cmd->add_option("--xi", smooth.xi, "unimodal weight");
  smooth_cmd->add_option("--eta", smooth.eta, "uniform weight");
  smooth_cmd->add_option("--tau", smooth.tau, "unimodal temperature");
  smooth_cmd->add_option("--norm", smooth.norm, "softmax|sum");
  smooth_cmd->add_flag("--json", smooth.as_json, "JSON output");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a prediction CSV");
  eval_cmd->add_option("--preds", eval.preds, "prediction CSV")->required();
  eval_cmd->add_option("--splits", eval.splits, "binarized splits, e.g. 0:1-4,0-1:2-4,0-2:3-4");
  eval_cmd->add_option("--tpr", eval.tpr, "target true positive rate");
  eval_cmd->add_flag("--json", eval.as_json, "JSON output");

  std::string train_config;
  auto* train_cmd = app.add_subcommand("train", "Run an experiment config; write histories, table and plot data");
  train_cmd->add_option("--config", train_config, "experiment JSON")->required();

  std::string bench_config;
  auto* bench_cmd = app.add_subcommand("bench", "Run an experiment config; write only the comparison table");
  bench_cmd->add_option("--config", bench_config, "experiment JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*loss_cmd) return run_loss(loss);
    if (*smooth_cmd) return run_smooth(smooth);
    if (*eval_cmd) return run_eval(eval);
    if (*train_cmd) return run_experiment(train_config, true);
    if (*bench_cmd) return run_experiment(bench_config, false);
  } catch (const ordot::TrainingDiverged& e) {
    std::cerr << "error: training diverged at epoch " << e.epoch() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
