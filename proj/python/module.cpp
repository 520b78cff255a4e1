#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pairstream/bounds.hpp"
#include "pairstream/data.hpp"
#include "pairstream/disttest.hpp"
#include "pairstream/eval.hpp"
#include "pairstream/learners.hpp"

namespace py = pybind11;
using namespace pairstream;

namespace {

AucBoundVariant auc_variant(const std::string& name) {
    if (name == "lq-ball") return AucBoundVariant::LqBall;
    if (name == "l1-ball") return AucBoundVariant::L1Ball;
    throw std::invalid_argument("unknown auc bound variant: " + name);
}

MetricBoundVariant metric_variant(const std::string& name) {
    if (name == "(2,2)") return MetricBoundVariant::Norm22;
    if (name == "(2,1)") return MetricBoundVariant::Norm21;
    if (name == "(1,1)") return MetricBoundVariant::Norm11;
    if (name == "s(1)") return MetricBoundVariant::SchattenTrace;
    throw std::invalid_argument("unknown metric bound variant: " + name);
}

MklBoundVariant mkl_variant(const std::string& name) {
    if (name == "l2-sphere") return MklBoundVariant::L2Sphere;
    if (name == "l1-simplex") return MklBoundVariant::L1Simplex;
    throw std::invalid_argument("unknown mkl bound variant: " + name);
}

}  // namespace

PYBIND11_MODULE(_pairstream, m) {
    m.doc() = "streaming pairwise learning: finite-buffer policies, the OLP "
              "learner, penalty/regret evaluators and Rademacher bound "
              "calculators";

    py::enum_<TaskKind>(m, "TaskKind")
        .value("AUC_LINEAR", TaskKind::AucLinear)
        .value("METRIC_MAHALANOBIS", TaskKind::MetricMahalanobis);

    py::enum_<Policy>(m, "Policy")
        .value("FIFO", Policy::Fifo)
        .value("RS", Policy::Rs)
        .value("RSX", Policy::Rsx)
        .value("RSX2", Policy::Rsx2);

    py::class_<RandomSource>(m, "RandomSource")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def_property_readonly("seed", &RandomSource::seed)
        .def_property_readonly("draw_count", &RandomSource::draw_count)
        .def("next_u64", &RandomSource::next_u64)
        .def("next_real", &RandomSource::next_real)
        .def("next_bounded", &RandomSource::next_bounded, py::arg("n"))
        .def("bernoulli", &RandomSource::bernoulli, py::arg("p"))
        .def("normal", &RandomSource::normal)
        .def("child", &RandomSource::child, py::arg("index"));

    py::class_<LabeledPoint>(m, "LabeledPoint")
        .def(py::init<>())
        .def(py::init([](std::vector<double> features, double label) {
                 return LabeledPoint{std::move(features), label};
             }),
             py::arg("features"), py::arg("label"))
        .def_readwrite("features", &LabeledPoint::features)
        .def_readwrite("label", &LabeledPoint::label);

    py::class_<Hypothesis>(m, "Hypothesis")
        .def(py::init([](std::vector<double> weights, TaskKind task) {
                 return Hypothesis{std::move(weights), task};
             }),
             py::arg("weights"), py::arg("task") = TaskKind::AucLinear)
        .def_readwrite("weights", &Hypothesis::weights)
        .def_readwrite("task", &Hypothesis::task);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<>())
        .def_readwrite("points", &Dataset::points)
        .def_readwrite("dimension", &Dataset::dimension)
        .def_readwrite("name", &Dataset::name)
        .def("__len__", &Dataset::size);

    m.def("make_stream", &make_stream, py::arg("dataset"), py::arg("rng"));

    py::class_<BufferEntry>(m, "BufferEntry")
        .def_readonly("point", &BufferEntry::point)
        .def_readonly("stream_index", &BufferEntry::stream_index);

    py::class_<AuxRecord>(m, "AuxRecord")
        .def_readonly("step", &AuxRecord::step)
        .def_readonly("appended", &AuxRecord::appended)
        .def_readonly("replaced_slots", &AuxRecord::replaced_slots)
        .def_readonly("bernoulli_draws", &AuxRecord::bernoulli_draws)
        .def_readonly("index_draws", &AuxRecord::index_draws)
        .def_readonly("binomial_draws", &AuxRecord::binomial_draws);

    py::class_<Buffer>(m, "Buffer")
        .def(py::init<Policy, std::size_t>(), py::arg("policy"), py::arg("capacity"))
        .def_property_readonly("policy", &Buffer::policy)
        .def_property_readonly("capacity", &Buffer::capacity)
        .def_property_readonly("steps_seen", &Buffer::steps_seen)
        .def("__len__", &Buffer::size)
        .def("entries", &Buffer::entries)
        .def(
            "update",
            [](Buffer& self, const LabeledPoint& z, std::size_t t, RandomSource* rng) {
                return self.update(z, t, rng);
            },
            py::arg("z"), py::arg("t"), py::arg("rng") = nullptr);

    m.def("replacement_pattern_probability", &replacement_pattern_probability, py::arg("s"),
          py::arg("t"), py::arg("k"));

    py::class_<PairwiseLoss>(m, "PairwiseLoss")
        .def(py::init([](TaskKind kind, double sigma) {
                 return PairwiseLoss{kind, sigma};
             }),
             py::arg("kind") = TaskKind::AucLinear, py::arg("sigma") = 0.0)
        .def_readwrite("kind", &PairwiseLoss::kind)
        .def_readwrite("sigma", &PairwiseLoss::sigma);

    m.def("pair_loss", &pair_loss);
    m.def("pair_subgradient", &pair_subgradient);
    m.def("all_pairs_penalty",
          [](const PairwiseLoss& loss, const Hypothesis& h, const LabeledPoint& z,
             const std::vector<LabeledPoint>& history) {
              return all_pairs_penalty(loss, h, z, history);
          });
    m.def("buffer_penalty", &buffer_penalty);
    m.def("expected_risk", &expected_risk);
    m.def("hinge_loss_bound", &hinge_loss_bound);

    py::class_<LearnerConfig>(m, "LearnerConfig")
        .def(py::init<>())
        .def_readwrite("eta_scale", &LearnerConfig::eta_scale)
        .def_readwrite("buffer_capacity", &LearnerConfig::buffer_capacity)
        .def_readwrite("policy", &LearnerConfig::policy)
        .def_readwrite("projection_radius", &LearnerConfig::projection_radius)
        .def_readwrite("loss", &LearnerConfig::loss)
        .def_readwrite("dimension", &LearnerConfig::dimension)
        .def_readwrite("record_snapshots", &LearnerConfig::record_snapshots);

    py::class_<EnsembleTrace>(m, "EnsembleTrace")
        .def_readonly("task", &EnsembleTrace::task)
        .def_readonly("hypotheses", &EnsembleTrace::hypotheses)
        .def_readonly("buffer_penalties", &EnsembleTrace::buffer_penalties)
        .def_readonly("buffer_snapshots", &EnsembleTrace::buffer_snapshots)
        .def("__len__", &EnsembleTrace::steps);

    m.def("project_l2_ball", &project_l2_ball, py::arg("w"), py::arg("radius"));
    m.def(
        "olp_run",
        [](const std::vector<LabeledPoint>& stream, const LearnerConfig& config,
           RandomSource& rng) { return olp_run(stream, config, rng); },
        py::arg("stream"), py::arg("config"), py::arg("rng"));
    m.def("average_hypothesis", &average_hypothesis);
    m.def("best_hypothesis", &best_hypothesis);
    m.def(
        "batch_all_pairs_minimizer",
        [](const std::vector<LabeledPoint>& stream, const PairwiseLoss& loss, double radius,
           std::size_t iterations) {
            return batch_all_pairs_minimizer(stream, loss, radius, iterations);
        },
        py::arg("stream"), py::arg("loss"), py::arg("radius"), py::arg("iterations"));

    py::class_<RiskReport>(m, "RiskReport")
        .def_readonly("ensemble_avg_risk", &RiskReport::ensemble_avg_risk)
        .def_readonly("avg_hyp_risk", &RiskReport::avg_hyp_risk)
        .def_readonly("best_hyp_risk", &RiskReport::best_hyp_risk);

    py::class_<RegretReport>(m, "RegretReport")
        .def_readonly("all_pairs_regret", &RegretReport::all_pairs_regret)
        .def_readonly("finite_buffer_regret", &RegretReport::finite_buffer_regret)
        .def_readonly("per_step_all_pairs", &RegretReport::per_step_all_pairs)
        .def_readonly("reference_objective", &RegretReport::reference_objective)
        .def_readonly("n", &RegretReport::n)
        .def_readonly("s", &RegretReport::s);

    m.def("auc_score", &auc_score);
    m.def("all_pairs_regret",
          [](const EnsembleTrace& trace, const std::vector<LabeledPoint>& stream,
             const PairwiseLoss& loss, const Hypothesis& reference) {
              return all_pairs_regret(trace, stream, loss, reference);
          });
    m.def("finite_buffer_regret",
          [](const EnsembleTrace& trace, const std::vector<LabeledPoint>& stream,
             const PairwiseLoss& loss, const Hypothesis& reference) {
              return finite_buffer_regret(trace, stream, loss, reference);
          });
    m.def("online_to_batch_report", &online_to_batch_report);
    m.def("regret_report",
          [](const EnsembleTrace& trace, const std::vector<LabeledPoint>& stream,
             const PairwiseLoss& loss, const Hypothesis& reference, std::size_t s) {
              return regret_report(trace, stream, loss, reference, s);
          });

    py::class_<BoundInputs>(m, "BoundInputs")
        .def(py::init<>())
        .def_readwrite("n", &BoundInputs::n)
        .def_readwrite("d", &BoundInputs::d)
        .def_readwrite("norm_x", &BoundInputs::norm_x)
        .def_readwrite("norm_x_inf", &BoundInputs::norm_x_inf)
        .def_readwrite("norm_w", &BoundInputs::norm_w)
        .def_readwrite("p", &BoundInputs::p)
        .def_readwrite("q", &BoundInputs::q)
        .def_readwrite("kappa", &BoundInputs::kappa)
        .def_readwrite("num_kernels", &BoundInputs::num_kernels)
        .def_readwrite("lipschitz", &BoundInputs::lipschitz)
        .def_readwrite("label_bound", &BoundInputs::label_bound)
        .def_readwrite("loss_bound", &BoundInputs::loss_bound)
        .def_readwrite("delta", &BoundInputs::delta)
        .def_readwrite("regret", &BoundInputs::regret)
        .def_readwrite("s", &BoundInputs::s)
        .def_readwrite("c_d", &BoundInputs::c_d);

    m.def("auc_rademacher_bound",
          [](const std::string& variant, const BoundInputs& in) {
              return auc_rademacher_bound(auc_variant(variant), in);
          });
    m.def("metric_rademacher_bound",
          [](const std::string& variant, const BoundInputs& in) {
              return metric_rademacher_bound(metric_variant(variant), in);
          });
    m.def("mkl_rademacher_bound",
          [](const std::string& variant, const BoundInputs& in) {
              return mkl_rademacher_bound(mkl_variant(variant), in);
          });
    m.def("contraction_bound", &contraction_bound, py::arg("lipschitz"), py::arg("label_bound"),
          py::arg("rad_of_h"));
    m.def(
        "excess_risk_bound_rhs",
        [](const std::string& kind, const BoundInputs& in, const std::vector<double>& rad) {
            if (kind == "all-pairs")
                return excess_risk_bound_rhs(RiskBoundKind::AllPairs, in, rad);
            if (kind == "finite-buffer")
                return excess_risk_bound_rhs(RiskBoundKind::FiniteBuffer, in, rad);
            throw std::invalid_argument("unknown bound kind: " + kind);
        },
        py::arg("kind"), py::arg("inputs"), py::arg("rad_terms"));
    m.def("cd_preset_l2", &cd_preset_l2);
    m.def("cd_preset_log", &cd_preset_log, py::arg("d"));

    py::class_<RademacherEstimate>(m, "RademacherEstimate")
        .def_readonly("mean", &RademacherEstimate::mean)
        .def_readonly("std_error", &RademacherEstimate::std_error)
        .def_readonly("trials", &RademacherEstimate::trials);
    m.def("empirical_rademacher_mc", &empirical_rademacher_mc, py::arg("radius"),
          py::arg("sample"), py::arg("n"), py::arg("trials"), py::arg("rng"));

    py::class_<SplitSpec>(m, "SplitSpec")
        .def(py::init([](double fraction, std::size_t cap, std::uint64_t seed) {
                 return SplitSpec{fraction, cap, seed};
             }),
             py::arg("train_fraction") = 0.6, py::arg("train_cap") = 20000, py::arg("seed") = 0)
        .def_readwrite("train_fraction", &SplitSpec::train_fraction)
        .def_readwrite("train_cap", &SplitSpec::train_cap)
        .def_readwrite("seed", &SplitSpec::seed);

    m.def("parse_libsvm",
          [](const std::string& text, const std::string& name,
             const std::vector<double>& positive_labels) {
              std::istringstream in(text);
              return parse_libsvm(in, name, LabelMapping{positive_labels});
          },
          py::arg("text"), py::arg("name") = "", py::arg("positive_labels") = std::vector<double>{});
    m.def("parse_libsvm_file",
          [](const std::string& path, const std::vector<double>& positive_labels) {
              return parse_libsvm_file(path, LabelMapping{positive_labels});
          },
          py::arg("path"), py::arg("positive_labels") = std::vector<double>{});
    m.def("write_libsvm", [](const Dataset& dataset) {
        std::ostringstream out;
        write_libsvm(dataset, out);
        return out.str();
    });
    m.def("split",
          [](const Dataset& dataset, const SplitSpec& spec) { return split(dataset, spec); },
          py::arg("dataset"), py::arg("spec"));
    m.def("synth_gaussian", &synth_gaussian, py::arg("n_pos"), py::arg("n_neg"), py::arg("d"),
          py::arg("separation"), py::arg("rng"));
    m.def(
        "normalize_features",
        [](const Dataset& dataset, const std::string& mode) {
            return normalize_features(dataset, normalize_mode_from_string(mode));
        },
        py::arg("dataset"), py::arg("mode") = "unit-l2");
    m.def("max_feature_norm", &max_feature_norm);

    m.def("chi_square_pvalue", &chi_square_pvalue, py::arg("statistic"), py::arg("dof"));
    m.def("tv_distance", [](const std::vector<double>& p, const std::vector<double>& q) {
        return tv_distance(p, q);
    });
    m.def("simulate_pattern_distribution", &simulate_pattern_distribution, py::arg("policy"),
          py::arg("capacity"), py::arg("trials"), py::arg("seed"));
}
