// pairstream: experiment driver for streaming pairwise learning.
//
// Subcommands: run, sweep, bounds, disttest, ingest. All artifacts are
// written atomically at the end of a successful run; repeated invocations
// with equal seeds produce byte-identical files. Exit codes: 0 success,
// 1 config error, 2 runtime/test failure.

#include <charconv>
#include <type_traits>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pairstream/bounds.hpp"
#include "pairstream/data.hpp"
#include "pairstream/disttest.hpp"
#include "pairstream/eval.hpp"
#include "pairstream/learners.hpp"

namespace ps = pairstream;
using json = nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr - buf);
}

struct Cell {
    std::string text;  // CSV rendering
    json value;        // typed JSON rendering
    Cell(std::string s) : text(s), value(std::move(s)) {}
    Cell(const char* s) : text(s), value(s) {}
    Cell(double v) : text(fmt_double(v)), value(v) {}
    Cell(bool v) : text(v ? "true" : "false"), value(v) {}
    template <typename T,
              typename = std::enable_if_t<std::is_integral_v<T> && !std::is_same_v<T, bool>>>
    Cell(T v) : text(std::to_string(v)), value(v) {}
    static Cell null() {
        Cell cell("");
        cell.value = nullptr;
        return cell;
    }
};

// Rows render to CSV or a JSON array with a fixed column order.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }

    std::string render(const std::string& format) const {
        if (format == "csv") {
            std::string out;
            for (std::size_t c = 0; c < columns.size(); ++c)
                out += columns[c] + (c + 1 < columns.size() ? "," : "\n");
            for (const auto& row : rows)
                for (std::size_t c = 0; c < row.size(); ++c)
                    out += row[c].text + (c + 1 < row.size() ? "," : "\n");
            return out;
        }
        json array = json::array();
        for (const auto& row : rows) {
            json obj;
            for (std::size_t c = 0; c < row.size(); ++c) obj[columns[c]] = row[c].value;
            array.push_back(obj);
        }
        return array.dump(2) + "\n";
    }
};

void emit(const Table& table, const std::string& format, const std::string& out_path) {
    const std::string rendered = table.render(format);
    if (out_path.empty()) {
        std::cout << rendered;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << rendered;
}

struct SynthSpec {
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    std::size_t d = 0;
    double separation = 0.0;
};

SynthSpec parse_synth_spec(const std::string& text) {
    SynthSpec spec;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad synth spec item: " + item);
        const std::string key = item.substr(0, eq);
        const double value = std::stod(item.substr(eq + 1));
        if (key == "pos")
            spec.n_pos = static_cast<std::size_t>(value);
        else if (key == "neg")
            spec.n_neg = static_cast<std::size_t>(value);
        else if (key == "d")
            spec.d = static_cast<std::size_t>(value);
        else if (key == "sep")
            spec.separation = value;
        else
            throw std::invalid_argument("unknown synth spec key: " + key);
    }
    if (spec.n_pos == 0 || spec.n_neg == 0 || spec.d == 0)
        throw std::invalid_argument("synth spec needs pos=, neg=, d=");
    return spec;
}

struct ExperimentOptions {
    std::string task = "auc";
    std::string data_path;
    std::string synth_spec;
    std::vector<std::string> policies{"rsx"};
    std::vector<std::size_t> buffer_sizes{64};
    double eta = 1.0;
    double radius = 1.0;
    double sigma = 0.0;
    std::vector<std::uint64_t> seeds;
    std::uint64_t master_seed = 0;
    double train_frac = 0.6;
    std::size_t train_cap = 20000;
    std::string normalize = "unit-l2";
    std::vector<double> positive_labels;
    std::string out;
    std::string format = "csv";
    bool timing = false;
};

void add_experiment_flags(CLI::App* cmd, ExperimentOptions& opt) {
    cmd->add_option("--task", opt.task, "auc or metric")
        ->check(CLI::IsMember({"auc", "metric"}));
    cmd->add_option("--data", opt.data_path, "LIBSVM data file");
    cmd->add_option("--synth", opt.synth_spec, "synthetic spec pos=..,neg=..,d=..,sep=..");
    cmd->add_option("--policy", opt.policies, "buffer policies (fifo|rs|rsx|rsx2)")
        ->delimiter(',');
    cmd->add_option("--buffer-sizes", opt.buffer_sizes, "buffer capacities")->delimiter(',');
    cmd->add_option("--eta", opt.eta, "step length scale");
    cmd->add_option("--radius", opt.radius, "projection radius");
    cmd->add_option("--sigma", opt.sigma, "regularization strength");
    cmd->add_option("--seeds", opt.seeds, "trial seeds")->delimiter(',');
    cmd->add_option("--master-seed", opt.master_seed, "seed used when --seeds is absent")
        ->envname("PAIRSTREAM_SEED");
    cmd->add_option("--train-frac", opt.train_frac, "train fraction");
    cmd->add_option("--train-cap", opt.train_cap, "train size cap");
    cmd->add_option("--normalize", opt.normalize, "unit-l2 or none")
        ->check(CLI::IsMember({"unit-l2", "none"}));
    cmd->add_option("--positive-labels", opt.positive_labels,
                    "raw labels mapped to +1 for multi-class files")
        ->delimiter(',');
    cmd->add_option("--out", opt.out, "output file (stdout when absent)");
    cmd->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--timing", opt.timing, "append a wall_millis column (breaks byte-identity)");
    cmd->set_config("--config");
}

struct TrialResult {
    std::string dataset;
    std::string policy;
    std::size_t s = 0;
    std::uint64_t seed = 0;
    std::optional<double> auc;
    double ensemble_avg_risk = 0.0;
    double avg_hyp_risk = 0.0;
    double wall_millis = 0.0;
};

// Child-stream layout per seed: 0 synth data, 1 split, 2 stream shuffle,
// 3 + i the learner for the i-th buffer size.
std::vector<TrialResult> run_grid(const ExperimentOptions& opt) {
    if (opt.buffer_sizes.empty()) throw std::invalid_argument("need at least one buffer size");
    if (opt.data_path.empty() == opt.synth_spec.empty())
        throw std::invalid_argument("exactly one of --data or --synth is required");
    const ps::TaskKind task =
        opt.task == "auc" ? ps::TaskKind::AucLinear : ps::TaskKind::MetricMahalanobis;
    const ps::PairwiseLoss loss{task, opt.sigma};
    const ps::NormalizeMode mode = ps::normalize_mode_from_string(opt.normalize);

    std::vector<std::uint64_t> seeds = opt.seeds;
    if (seeds.empty()) seeds.push_back(opt.master_seed);

    std::optional<ps::Dataset> file_data;
    if (!opt.data_path.empty())
        file_data = ps::parse_libsvm_file(opt.data_path, ps::LabelMapping{opt.positive_labels});

    std::vector<std::size_t> sizes = opt.buffer_sizes;
    std::sort(sizes.begin(), sizes.end());

    std::vector<TrialResult> results;
    for (const std::string& policy_name : opt.policies) {
        const ps::Policy policy = ps::policy_from_string(policy_name);
        for (std::size_t si = 0; si < sizes.size(); ++si) {
            for (std::uint64_t seed : seeds) {
                const auto started = std::chrono::steady_clock::now();
                ps::RandomSource master(seed);
                ps::Dataset data;
                if (file_data) {
                    data = *file_data;
                } else {
                    const SynthSpec spec = parse_synth_spec(opt.synth_spec);
                    ps::RandomSource gen = master.child(0);
                    data = ps::synth_gaussian(spec.n_pos, spec.n_neg, spec.d, spec.separation,
                                              gen);
                }
                data = ps::normalize_features(std::move(data), mode);
                ps::RandomSource split_rng = master.child(1);
                const auto [train, test] =
                    ps::split(data, ps::SplitSpec{opt.train_frac, opt.train_cap, 0}, split_rng);
                ps::RandomSource shuffle_rng = master.child(2);
                const auto stream = ps::make_stream(train, shuffle_rng);

                ps::LearnerConfig config;
                config.eta_scale = opt.eta;
                config.buffer_capacity = sizes[si];
                config.policy = policy;
                config.projection_radius = opt.radius;
                config.loss = loss;
                config.dimension = data.dimension;
                ps::RandomSource learner_rng = master.child(3 + si);
                const auto trace = ps::olp_run(stream, config, learner_rng);

                TrialResult row;
                row.dataset = data.name;
                row.policy = policy_name;
                row.s = sizes[si];
                row.seed = seed;
                const auto report = ps::online_to_batch_report(trace, test, loss);
                row.ensemble_avg_risk = report.ensemble_avg_risk;
                row.avg_hyp_risk = report.avg_hyp_risk;
                if (task == ps::TaskKind::AucLinear)
                    row.auc = ps::auc_score(ps::average_hypothesis(trace), test);
                row.wall_millis =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              started)
                        .count();
                results.push_back(std::move(row));
            }
        }
    }
    return results;
}

Table results_table(const std::vector<TrialResult>& results, bool timing) {
    Table table;
    table.columns = {"dataset", "policy", "s", "seed", "auc", "ensemble_avg_risk",
                     "avg_hyp_risk"};
    if (timing) table.columns.push_back("wall_millis");
    for (const auto& r : results) {
        std::vector<Cell> row{r.dataset,
                              r.policy,
                              r.s,
                              r.seed,
                              r.auc ? Cell(*r.auc) : Cell::null(),
                              r.ensemble_avg_risk,
                              r.avg_hyp_risk};
        if (timing) row.push_back(r.wall_millis);
        table.add(std::move(row));
    }
    return table;
}

Table summary_table(const std::vector<TrialResult>& results) {
    Table table;
    table.columns = {"policy", "s", "mean_auc", "sd_auc", "trials"};
    std::map<std::pair<std::string, std::size_t>, std::vector<double>> groups;
    for (const auto& r : results)
        if (r.auc) groups[{r.policy, r.s}].push_back(*r.auc);
    for (const auto& [key, values] : groups) {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        const double sd =
            values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
        table.add({key.first, key.second, mean, sd, values.size()});
    }
    return table;
}

std::map<std::string, double> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::map<std::string, double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected key=value");
        values[trimmed.substr(0, eq)] = std::stod(trimmed.substr(eq + 1));
    }
    return values;
}

int cmd_bounds(const std::string& inputs_path, const std::string& out,
               const std::string& format) {
    const auto kv = parse_kv_file(inputs_path);
    const auto get = [&](const std::string& key, double fallback) {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };
    if (!kv.count("n")) throw std::invalid_argument("bounds inputs need n=");

    ps::BoundInputs in;
    in.n = static_cast<std::size_t>(get("n", 0));
    in.d = static_cast<std::size_t>(get("d", 2));
    in.norm_x = get("norm_x", 1.0);
    in.norm_x_inf = get("norm_x_inf", 1.0);
    in.norm_w = get("norm_w", 1.0);
    in.p = get("p", 2.0);
    in.q = get("q", in.p > 1.0 ? in.p / (in.p - 1.0) : 2.0);
    in.kappa = get("kappa", 1.0);
    in.num_kernels = static_cast<std::size_t>(get("num_kernels", 2));
    in.lipschitz = get("lipschitz", 1.0);
    in.label_bound = get("label_bound", 2.0);
    in.loss_bound = get("loss_bound", 1.0);
    in.delta = get("delta", 0.1);
    in.regret = get("regret", 0.0);
    in.s = static_cast<std::size_t>(get("s", 1));

    Table table;
    table.columns = {"table", "variant", "formula", "value"};
    table.add({"auc", "lq-ball", "2*|X|_p*|W|_q*sqrt((p-1)/n)",
               ps::auc_rademacher_bound(ps::AucBoundVariant::LqBall, in)});
    table.add({"auc", "l1-ball", "2*|X|_inf*|W|_1*sqrt(e*log(d)/n)",
               ps::auc_rademacher_bound(ps::AucBoundVariant::L1Ball, in)});
    table.add({"metric", "(2,2)", "|X|_2^2*|W|_22*sqrt(1/n)",
               ps::metric_rademacher_bound(ps::MetricBoundVariant::Norm22, in)});
    table.add({"metric", "(2,1)", "|X|_2*|X|_inf*|W|_21*sqrt(e*log(d)/n)",
               ps::metric_rademacher_bound(ps::MetricBoundVariant::Norm21, in)});
    table.add({"metric", "(1,1)", "|X|_inf^2*|W|_11*sqrt(2*e*log(d)/n)",
               ps::metric_rademacher_bound(ps::MetricBoundVariant::Norm11, in)});
    table.add({"metric", "s(1)", "|X|_2^2*|W|_S1*sqrt(e*log(d)/n)",
               ps::metric_rademacher_bound(ps::MetricBoundVariant::SchattenTrace, in)});
    table.add({"mkl", "l2-sphere", "kappa^2*sqrt(p/n)",
               ps::mkl_rademacher_bound(ps::MklBoundVariant::L2Sphere, in)});
    table.add({"mkl", "l1-simplex", "kappa^2*sqrt(e*log(p)/n)",
               ps::mkl_rademacher_bound(ps::MklBoundVariant::L1Simplex, in)});
    table.add({"contraction", "l-y-rad", "L*Y*Rad",
               ps::contraction_bound(in.lipschitz, in.label_bound,
                                     ps::auc_rademacher_bound(ps::AucBoundVariant::LqBall, in))});
    if (kv.count("rad_term")) {
        const std::vector<double> rad(in.n - 1, get("rad_term", 0.0));
        table.add({"excess-risk", "all-pairs",
                   "4/(n-1)*sum(rad)+regret/(n-1)+6*B*sqrt(log(n/delta)/(n-1))",
                   ps::excess_risk_bound_rhs(ps::RiskBoundKind::AllPairs, in, rad)});
        if (kv.count("s"))
            table.add({"excess-risk", "finite-buffer",
                       "4/(n-1)*sum(rad)+regret/(n-1)+6*B*sqrt(log(n/delta)/s)",
                       ps::excess_risk_bound_rhs(ps::RiskBoundKind::FiniteBuffer, in, rad)});
    }
    emit(table, format, out);
    return 0;
}

int cmd_disttest(const std::string& policy_name, std::size_t s, std::size_t stream_len,
                 std::size_t trials, std::uint64_t seed, const std::string& out,
                 const std::string& format) {
    if (trials < 10000) throw std::invalid_argument("disttest needs at least 10^4 trials");
    if (stream_len < 2) throw std::invalid_argument("stream length must be >= 2");
    const ps::Policy policy = ps::policy_from_string(policy_name);
    const std::size_t updates = stream_len - 1;  // buffer state presented at step stream_len

    std::vector<ps::DistTestResult> checks;
    ps::SlotHistogram hist;
    switch (policy) {
        case ps::Policy::Fifo:
            checks.push_back(ps::fifo_content_test(s, updates, seed));
            hist = ps::simulate_slot_histogram(policy, s, updates, 1, seed);
            break;
        case ps::Policy::Rs:
            hist = ps::simulate_slot_histogram(policy, s, updates, trials, seed);
            checks.push_back(ps::aggregate_marginal_test(hist, 0.01));
            break;
        case ps::Policy::Rsx: {
            hist = ps::simulate_slot_histogram(policy, s, updates, trials, seed);
            for (auto& r : ps::marginal_uniformity_tests(hist, 1e-3)) checks.push_back(r);
            if (s == 2)
                checks.push_back(ps::joint_independence_test(policy, std::min<std::size_t>(updates, 5),
                                                             trials, seed + 1, 0.01));
            const auto patterns = ps::simulate_pattern_distribution(policy, s, trials, seed + 2);
            checks.push_back(ps::pattern_law_test(patterns, s, 0.005));
            break;
        }
        case ps::Policy::Rsx2: {
            hist = ps::simulate_slot_histogram(policy, s, updates, trials, seed);
            for (auto& r : ps::marginal_uniformity_tests(hist, 1e-3)) checks.push_back(r);
            const auto own = ps::simulate_pattern_distribution(policy, s, trials, seed + 2);
            const auto other =
                ps::simulate_pattern_distribution(ps::Policy::Rsx, s, trials, seed + 3);
            checks.push_back(ps::pattern_law_test(own, s, 0.005));
            checks.push_back(ps::pattern_agreement_test(own, other, 0.01));
            break;
        }
    }

    Table report;
    report.columns = {"test", "statistic", "threshold", "pass"};
    bool all_pass = true;
    for (const auto& r : checks) {
        report.add({r.name, r.statistic, r.threshold, r.pass});
        all_pass &= r.pass;
    }
    std::cout << report.render("csv");

    if (!out.empty()) {
        Table dump;
        dump.columns = {"slot", "stream_index", "count"};
        for (std::size_t slot = 0; slot < hist.counts.size(); ++slot)
            for (std::size_t i = 0; i < hist.counts[slot].size(); ++i)
                dump.add({slot, i + 1, static_cast<std::size_t>(hist.counts[slot][i])});
        emit(dump, format, out);
    }
    return all_pass ? 0 : 2;
}

int cmd_ingest(const std::string& data_path, const std::vector<double>& positive_labels,
               const std::string& out, const std::string& format) {
    const auto data = ps::parse_libsvm_file(data_path, ps::LabelMapping{positive_labels});
    std::size_t positives = 0;
    for (const auto& p : data.points)
        if (p.label > 0) ++positives;
    Table table;
    table.columns = {"key", "value"};
    table.add({"name", data.name});
    table.add({"points", data.size()});
    table.add({"dimension", data.dimension});
    table.add({"positives", positives});
    table.add({"negatives", data.size() - positives});
    table.add({"max_feature_norm", ps::max_feature_norm(data)});
    emit(table, format, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming pairwise-learning toolkit"};
    app.require_subcommand(1);

    ExperimentOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "single experiment over seeds and buffer sizes");
    add_experiment_flags(run, run_opt);

    ExperimentOptions sweep_opt;
    CLI::App* sweep = app.add_subcommand("sweep", "buffer-size sweep with a summary table");
    add_experiment_flags(sweep, sweep_opt);

    std::string bounds_inputs, bounds_out, bounds_format = "csv";
    CLI::App* bounds = app.add_subcommand("bounds", "closed-form bound tables");
    bounds->add_option("--inputs", bounds_inputs, "key=value inputs file")->required();
    bounds->add_option("--out", bounds_out, "output file");
    bounds->add_option("--format", bounds_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string dist_policy = "rsx", dist_out, dist_format = "csv";
    std::size_t dist_s = 4, dist_stream = 20, dist_trials = 200000;
    std::uint64_t dist_seed = 0;
    CLI::App* dist = app.add_subcommand("disttest", "sampling-distribution checks");
    dist->add_option("--policy", dist_policy, "fifo|rs|rsx|rsx2");
    dist->add_option("--buffer-size", dist_s, "buffer capacity");
    dist->add_option("--stream-len", dist_stream, "stream length");
    dist->add_option("--trials", dist_trials, "Monte-Carlo trials (>= 10^4)");
    dist->add_option("--seed", dist_seed, "master seed")->envname("PAIRSTREAM_SEED");
    dist->add_option("--out", dist_out, "slot histogram CSV");
    dist->add_option("--format", dist_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string ingest_data, ingest_out, ingest_format = "csv";
    std::vector<double> ingest_positive;
    CLI::App* ingest = app.add_subcommand("ingest", "parse, validate and describe a dataset");
    ingest->add_option("--data", ingest_data, "LIBSVM data file")->required();
    ingest->add_option("--positive-labels", ingest_positive, "labels mapped to +1")
        ->delimiter(',');
    ingest->add_option("--out", ingest_out, "output file");
    ingest->add_option("--format", ingest_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // flag/usage problems are config errors
    }

    try {
        if (run->parsed()) {
            const auto results = run_grid(run_opt);
            emit(results_table(results, run_opt.timing), run_opt.format, run_opt.out);
            return 0;
        }
        if (sweep->parsed()) {
            if (sweep_opt.buffer_sizes.size() < 2)
                throw std::invalid_argument("sweep needs >=2 sizes");
            const auto results = run_grid(sweep_opt);
            emit(results_table(results, sweep_opt.timing), sweep_opt.format, sweep_opt.out);
            const Table summary = summary_table(results);
            if (sweep_opt.out.empty())
                std::cout << summary.render(sweep_opt.format);
            else
                emit(summary, sweep_opt.format, sweep_opt.out + ".summary");
            return 0;
        }
        if (bounds->parsed()) return cmd_bounds(bounds_inputs, bounds_out, bounds_format);
        if (dist->parsed())
            return cmd_disttest(dist_policy, dist_s, dist_stream, dist_trials, dist_seed,
                                dist_out, dist_format);
        if (ingest->parsed())
            return cmd_ingest(ingest_data, ingest_positive, ingest_out, ingest_format);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
