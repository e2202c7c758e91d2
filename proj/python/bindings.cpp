#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ordot/error.hpp"
#include "ordot/exact.hpp"
#include "ordot/experiment.hpp"
#include "ordot/io.hpp"
#include "ordot/loss.hpp"
#include "ordot/lp_oracle.hpp"
#include "ordot/metrics.hpp"
#include "ordot/sinkhorn.hpp"
#include "ordot/smoothing.hpp"

namespace py = pybind11;
using namespace ordot;

namespace {

Histogram hist(const std::vector<double>& v, bool renormalize) {
  return make_histogram(v, renormalize ? Normalization::kRenormalize : Normalization::kStrict);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact and entropic 1-D optimal transport losses for ordinal labels";
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<MetricFamily>(m, "MetricFamily")
      .def_static("linear", &MetricFamily::linear)
      .def_static("power", &MetricFamily::power, py::arg("rho"))
      .def_static("huber", &MetricFamily::huber, py::arg("tau"))
      .def_static("step", &MetricFamily::step)
      .def("__call__", &MetricFamily::operator(), py::arg("d"))
      .def_property_readonly("is_convex", &MetricFamily::is_convex)
      .def("__repr__", [](const MetricFamily& f) { return "MetricFamily(" + f.describe() + ")"; });

  py::class_<SmoothingConfig>(m, "SmoothingConfig")
      .def(py::init([](double xi, double eta, double tau, const std::string& norm) {
             SmoothingConfig c{xi, eta, tau, UnimodalNorm::kSoftmax};
             if (norm == "sum") {
               c.unimodal_norm = UnimodalNorm::kSum;
             } else if (norm != "softmax") {
               throw ConfigError("norm must be 'softmax' or 'sum'");
             }
             c.validate();
             return c;
           }),
           py::arg("xi") = 0.15, py::arg("eta") = 0.05, py::arg("tau") = 1.0, py::arg("norm") = "softmax")
      .def_readwrite("xi", &SmoothingConfig::xi)
      .def_readwrite("eta", &SmoothingConfig::eta)
      .def_readwrite("tau", &SmoothingConfig::tau);

  py::class_<SinkhornConfig>(m, "SinkhornConfig")
      .def(py::init([](double epsilon, int max_iters, double tol) {
             SinkhornConfig c{epsilon, max_iters, tol};
             c.validate();
             return c;
           }),
           py::arg("epsilon") = 0.1, py::arg("max_iters") = 10000, py::arg("convergence_tol") = 1e-8)
      .def_readwrite("epsilon", &SinkhornConfig::epsilon)
      .def_readwrite("max_iters", &SinkhornConfig::max_iters)
      .def_readwrite("convergence_tol", &SinkhornConfig::convergence_tol);

  py::enum_<LossKind>(m, "LossKind")
      .value("WASSERSTEIN_ONEHOT", LossKind::kWassersteinOneHot)
      .value("WASSERSTEIN_LINEAR", LossKind::kWassersteinLinear)
      .value("WASSERSTEIN_CONVEX", LossKind::kWassersteinConvex)
      .value("WASSERSTEIN_STEP", LossKind::kWassersteinStep)
      .value("CROSS_ENTROPY", LossKind::kCrossEntropy)
      .value("SMOOTHED_CROSS_ENTROPY", LossKind::kSmoothedCrossEntropy)
      .value("REGRESSION", LossKind::kRegression)
      .value("SINKHORN", LossKind::kSinkhorn);

  py::class_<LossSpec>(m, "LossSpec")
      .def(py::init([](LossKind kind, MetricFamily family, std::optional<SmoothingConfig> smoothing,
                       std::optional<SinkhornConfig> sinkhorn) {
             LossSpec s;
             s.kind = kind;
             s.family = family;
             s.smoothing = smoothing;
             if (sinkhorn) s.sinkhorn = *sinkhorn;
             s.validate();
             return s;
           }),
           py::arg("kind"), py::arg("family") = MetricFamily::linear(), py::arg("smoothing") = py::none(),
           py::arg("sinkhorn") = py::none())
      .def_readonly("kind", &LossSpec::kind)
      .def_readonly("family", &LossSpec::family)
      .def_readonly("smoothing", &LossSpec::smoothing);

  py::class_<LossFunction>(m, "LossFunction")
      .def(py::init<LossSpec, int>(), py::arg("spec"), py::arg("n_classes"))
      .def("target", [](const LossFunction& f, int j) { return f.target(j).vector(); }, py::arg("j_star"))
      .def(
          "value", [](const LossFunction& f, const std::vector<double>& z, int j) { return f.value(z, j); },
          py::arg("logits"), py::arg("j_star"))
      .def(
          "__call__",
          [](const LossFunction& f, const std::vector<double>& z, int j) {
            auto r = f.evaluate(z, j);
            return py::make_tuple(r.value, r.grad_logits);
          },
          py::arg("logits"), py::arg("j_star"), "Returns (value, gradient w.r.t. logits).")
      .def(
          "batch",
          [](const LossFunction& f, const Eigen::MatrixXd& z, const std::vector<int>& labels) {
            auto r = f.evaluate_batch(z, labels);
            return py::make_tuple(r.mean_value, r.grad_logits);
          },
          py::arg("logits"), py::arg("labels"), "Mean loss and per-row gradients of the mean.");

  m.def(
      "softmax", [](const std::vector<double>& z) { return softmax(z).vector(); }, py::arg("logits"));

  m.def(
      "ground_matrix", [](int n, const MetricFamily& f) { return build_ground_matrix(n, f).costs(); }, py::arg("n"),
      py::arg("family") = MetricFamily::linear());

  m.def(
      "wasserstein_linear",
      [](const std::vector<double>& s, const std::vector<double>& t, bool renorm) {
        return wasserstein_linear(hist(s, renorm), hist(t, renorm));
      },
      py::arg("s"), py::arg("t"), py::arg("renormalize") = false);
  m.def(
      "wasserstein_step",
      [](const std::vector<double>& s, const std::vector<double>& t, bool renorm) {
        return wasserstein_step(hist(s, renorm), hist(t, renorm));
      },
      py::arg("s"), py::arg("t"), py::arg("renormalize") = false);
  m.def(
      "wasserstein_convex",
      [](const std::vector<double>& s, const std::vector<double>& t, const MetricFamily& f, bool renorm) {
        const auto hs = hist(s, renorm);
        return wasserstein_convex(hs, hist(t, renorm), build_ground_matrix(static_cast<int>(hs.size()), f));
      },
      py::arg("s"), py::arg("t"), py::arg("family"), py::arg("renormalize") = false);
  m.def(
      "wasserstein",
      [](const std::vector<double>& s, const std::vector<double>& t, const MetricFamily& f, bool renorm) {
        const auto hs = hist(s, renorm);
        return wasserstein_exact(hs, hist(t, renorm), build_ground_matrix(static_cast<int>(hs.size()), f));
      },
      py::arg("s"), py::arg("t"), py::arg("family") = MetricFamily::linear(), py::arg("renormalize") = false);
  m.def(
      "wasserstein_onehot",
      [](const std::vector<double>& s, int j, const MetricFamily& f) {
        const auto hs = hist(s, false);
        const int n = static_cast<int>(hs.size());
        return wasserstein_onehot(hs, OneHotLabel(j, n), build_ground_matrix(n, f));
      },
      py::arg("s"), py::arg("j_star"), py::arg("family") = MetricFamily::linear());
  m.def(
      "monotone_coupling",
      [](const std::vector<double>& s, const std::vector<double>& t) {
        return monotone_coupling(hist(s, false), hist(t, false)).mass;
      },
      py::arg("s"), py::arg("t"));
  m.def(
      "lp_oracle",
      [](const std::vector<double>& s, const std::vector<double>& t, const MetricFamily& f) {
        const auto hs = hist(s, false);
        const auto r = lp_oracle(hs, hist(t, false), build_ground_matrix(static_cast<int>(hs.size()), f));
        return py::make_tuple(r.cost, r.plan.mass);
      },
      py::arg("s"), py::arg("t"), py::arg("family") = MetricFamily::linear(),
      "Exact transport by the simplex method; returns (cost, plan).");
  m.def(
      "sinkhorn",
      [](const std::vector<double>& s, const std::vector<double>& t, const MetricFamily& f,
         const SinkhornConfig& cfg) {
        const auto hs = hist(s, false);
        const auto r = sinkhorn(hs, hist(t, false), build_ground_matrix(static_cast<int>(hs.size()), f), cfg);
        py::dict out;
        out["cost"] = r.cost;
        out["iterations"] = r.iterations;
        out["converged"] = r.converged;
        out["marginal_violation"] = r.marginal_violation;
        out["plan"] = r.plan;
        return out;
      },
      py::arg("s"), py::arg("t"), py::arg("family") = MetricFamily::linear(), py::arg("config") = SinkhornConfig{});

  m.def(
      "unimodal_distribution",
      [](int j, int n, double tau, const std::string& norm) {
        return unimodal_distribution(j, n, tau, norm == "sum" ? UnimodalNorm::kSum : UnimodalNorm::kSoftmax).vector();
      },
      py::arg("j_star"), py::arg("n"), py::arg("tau") = 1.0, py::arg("norm") = "softmax");
  m.def(
      "smooth_label",
      [](int j, int n, const SmoothingConfig& cfg) { return smooth_label(OneHotLabel(j, n), cfg).vector(); },
      py::arg("j_star"), py::arg("n"), py::arg("config") = SmoothingConfig{});

  m.def(
      "accuracy", [](const std::vector<int>& p, const std::vector<int>& t) { return accuracy(p, t); }, py::arg("preds"),
      py::arg("truths"));
  m.def(
      "mae", [](const std::vector<int>& p, const std::vector<int>& t) { return mae(p, t); }, py::arg("preds"),
      py::arg("truths"));
  m.def(
      "qwk", [](const std::vector<int>& p, const std::vector<int>& t, int n) { return qwk(p, t, n); },
      py::arg("preds"), py::arg("truths"), py::arg("n_classes"));
  m.def(
      "tnr_at_tpr",
      [](const std::vector<double>& s, const std::vector<int>& y, double target) { return tnr_at_tpr(s, y, target); },
      py::arg("scores"), py::arg("labels"), py::arg("tpr") = 0.95);

  m.def(
      "run_experiment",
      [](const std::filesystem::path& config, bool write) {
        const auto cfg = io::load_experiment(config);
        ComparisonResult result;
        {
          py::gil_scoped_release release;
          result = run_comparison(cfg);
          if (write) io::write_experiment_outputs(result, cfg.output_dir);
        }
        return io::comparison_text(result);
      },
      py::arg("config"), py::arg("write_outputs") = false,
      "Trains every run of an experiment config and returns the comparison table.");
}
