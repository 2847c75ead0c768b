// Command-line front end: simulate data, fit models, predict, explain
// feature importance, run perturbation and sparsity analyses, and build
// early-warning rule trees. Exit codes: 0 success, 2 bad input or
// configuration, 3 numerical or evaluation failure.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ipl/ipl.hpp"

namespace {

using namespace ipl;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        std::string item = s.substr(pos, comma - pos);
        while (!item.empty() && (item.front() == ' ' || item.front() == '\t')) item.erase(0, 1);
        while (!item.empty() && (item.back() == ' ' || item.back() == '\t')) item.pop_back();
        if (!item.empty()) out.push_back(std::move(item));
        pos = comma + 1;
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(parse_double(item, what));
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

int parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": cannot parse '" + s + "' as an integer");
    }
}

// Accepts "1,2,5" and range tokens "1..15".
std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
    std::vector<int> out;
    for (const auto& item : split_list(s)) {
        const std::size_t dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int(item, what));
            continue;
        }
        const int lo = parse_int(item.substr(0, dots), what);
        const int hi = parse_int(item.substr(dots + 2), what);
        if (hi < lo) throw ConfigError(what + ": empty range '" + item + "'");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

// ---------------------------------------------------------------- data in

struct DataOptions {
    std::string target_col;
    std::string timestamp_col;
    std::string feature_cols; // comma list; empty = every other column
    int stride = 1;
    int direction_k = 0; // > 0: replace targets with k-step direction labels
};

void add_data_options(CLI::App* cmd, DataOptions& o, bool target_required) {
    auto* t = cmd->add_option("--target-col", o.target_col, "Name of the target column");
    if (target_required) t->required();
    cmd->add_option("--timestamp-col", o.timestamp_col,
                    "Optional timestamp column (absent: row order is time)");
    cmd->add_option("--feature-cols", o.feature_cols,
                    "Comma-separated feature columns (default: all other columns)");
    cmd->add_option("--stride", o.stride, "Keep every stride-th row")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--direction-k", o.direction_k,
                    "Replace targets with +1/-1 labels for k-step-ahead price direction")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

RawSeries load_series(const std::string& path, const DataOptions& o) {
    ColumnRoles roles;
    roles.target = o.target_col;
    roles.timestamp = o.timestamp_col;
    roles.features = split_list(o.feature_cols);
    RawSeries series = load_raw_series(path, roles);
    if (o.stride > 1) series = subsample_series(series, o.stride);
    if (o.direction_k > 0) series = make_direction_series(series, o.direction_k);
    return series;
}

// ------------------------------------------------------------- model opts

struct ModelOptions {
    int degree = 2;
    std::string loss = "squared";
    int lx = 0;
    int ly = 0;
    double threshold = 0.0;
    bool no_scale = false;
    std::string center_strategy = "first_samples";
    std::uint64_t center_seed = 0;
    std::string solver = "auto";
    double admm_alpha = 0.0;
    double admm_beta = 0.0;
    int admm_max_iters = 5000;
    double admm_tol_primal = 1e-6;
    double admm_tol_dual = 1e-6;
};

void add_model_options(CLI::App* cmd, ModelOptions& o) {
    cmd->add_option("--degree", o.degree, "Polynomial degree s")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--loss", o.loss, "Loss function")
        ->check(CLI::IsMember({"squared", "hinge", "logistic"}))
        ->capture_default_str();
    cmd->add_option("--lx", o.lx, "Lagged feature vectors to embed")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--ly", o.ly, "Lagged target values to embed")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--threshold", o.threshold,
                    "Keep expansion terms with |coefficient| >= this")
        ->capture_default_str();
    cmd->add_flag("--no-scale", o.no_scale, "Disable min-max input scaling");
    cmd->add_option("--center-strategy", o.center_strategy, "How kernel centers are chosen")
        ->check(CLI::IsMember({"first_samples", "random_uniform", "random_subsample"}))
        ->capture_default_str();
    cmd->add_option("--center-seed", o.center_seed, "Seed for randomized center strategies")
        ->capture_default_str();
    cmd->add_option("--solver", o.solver, "Weight solver")
        ->check(CLI::IsMember({"auto", "pinv", "admm"}))
        ->capture_default_str();
    cmd->add_option("--admm-alpha", o.admm_alpha, "Proximal parameter (<= 0: automatic)")
        ->capture_default_str();
    cmd->add_option("--admm-beta", o.admm_beta, "Penalty parameter (<= 0: automatic)")
        ->capture_default_str();
    cmd->add_option("--admm-max-iters", o.admm_max_iters, "Iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--admm-tol-primal", o.admm_tol_primal, "Primal residual tolerance")
        ->capture_default_str();
    cmd->add_option("--admm-tol-dual", o.admm_tol_dual, "Dual residual tolerance")
        ->capture_default_str();
}

FitOptions to_fit_options(const ModelOptions& o, int threads) {
    FitOptions f;
    f.degree = o.degree;
    f.loss = loss_from_string(o.loss);
    f.lag = LagSpec{o.lx, o.ly};
    f.threshold = o.threshold;
    f.scale = !o.no_scale;
    f.center_strategy = center_strategy_from_string(o.center_strategy);
    f.center_seed = o.center_seed;
    f.solver = solver_from_string(o.solver);
    f.admm.alpha = o.admm_alpha;
    f.admm.beta = o.admm_beta;
    f.admm.max_iters = o.admm_max_iters;
    f.admm.tol_primal = o.admm_tol_primal;
    f.admm.tol_dual = o.admm_tol_dual;
    f.threads = threads;
    return f;
}

// ------------------------------------------------------------- table out

void write_table(const std::string& out_path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    if (out_path.empty() || out_path == "-") {
        write_csv(std::cout, header, rows);
    } else {
        write_csv_file(out_path, header, rows);
    }
}

std::string exponents_key(const MultiIndex& m) {
    std::string s;
    for (std::size_t i = 0; i < m.exponents.size(); ++i) {
        if (i > 0) s += ';';
        s += std::to_string(m.exponents[i]);
    }
    return s;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string out_train;
    std::string out_test;
    std::string out_truth;
    std::uint64_t seed = 0;
    Eigen::Index t_train = 4000;
    Eigen::Index t_test = 1000;
    double noise_sd = 0.1;
    bool temporal = true;
    bool add_irrelevant = false;
};

int run_simulate(const SimulateArgs& a) {
    SimulateOptions opt;
    opt.t_train = a.t_train;
    opt.t_test = a.t_test;
    opt.seed = a.seed;
    opt.include_temporal = a.temporal;
    opt.noise_sd = a.noise_sd;
    opt.add_irrelevant = a.add_irrelevant;

    const SimulatedData data = simulate_forecasting_task(opt);
    save_raw_series(a.out_train, data.train);
    save_raw_series(a.out_test, data.test);
    if (!a.out_truth.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& term : data.truth.terms)
            rows.push_back({term_name(term.index, data.truth.feature_names),
                            exponents_key(term.index), format_double(term.coefficient)});
        write_csv_file(a.out_truth, {"term", "exponents", "coefficient"}, rows);
    }
    std::cerr << "wrote " << data.train.rows() << " train rows, " << data.test.rows()
              << " test rows (seed " << a.seed << ")\n";
    return 0;
}

// --------------------------------------------------------------------- fit

struct FitArgs {
    std::string data_path;
    std::string out_path;
    DataOptions data;
    ModelOptions model;
    int threads = 1;
};

int run_fit(const FitArgs& a) {
    const RawSeries series = load_series(a.data_path, a.data);
    auto [outcome, embedded] = fit_series(series, to_fit_options(a.model, a.threads));

    ModelFile mf;
    mf.seed = a.model.center_seed;
    mf.model = outcome.model;
    mf.sparse = outcome.sparse;
    ModelFile::FitSummary summary;
    summary.solver = outcome.solver_used;
    summary.iterations = outcome.report.iterations;
    summary.final_primal = outcome.report.final_primal;
    summary.final_dual = outcome.report.final_dual;
    summary.objective = outcome.report.objective_trace.empty()
                            ? outcome.report.initial_objective
                            : outcome.report.objective_trace.back();
    summary.converged = outcome.report.converged;
    mf.fit = summary;
    save_model_file(a.out_path, mf);

    for (const auto& w : outcome.report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "rows: " << embedded.rows() << "  embedded_dim: " << embedded.dim()
              << "  centers: " << outcome.model.centers.n() << "\n"
              << "solver: " << outcome.solver_used << "  iterations: " << summary.iterations
              << "  objective: " << format_double(summary.objective) << "\n"
              << "primal: " << format_double(summary.final_primal)
              << "  dual: " << format_double(summary.final_dual) << "  sparse_terms: "
              << mf.sparse->terms.size() << "\n"
              << "wall_seconds: " << format_double(outcome.wall_seconds) << "\n";
    return 0;
}

// ----------------------------------------------------------------- predict

struct PredictArgs {
    std::string model_path;
    std::string data_path;
    std::string out_path;
    std::string target_col;
    std::string timestamp_col;
    int stride = 1;
    int direction_k = 0;
    bool use_kernel = false;
    int threads = 1;
};

// Raw feature names are the lag-0 embedded names with their "[t]" suffix
// stripped; the data file must provide exactly those columns.
std::vector<std::string> raw_feature_names(const KernelModel& model) {
    const int D = static_cast<int>(model.feature_names.size());
    const int d = (D - model.lag.ly) / (1 + model.lag.lx);
    if (d < 0 || model.lag.embedded_dim(d) != D)
        throw ConfigError("model file: lag spec is inconsistent with its feature names");
    std::vector<std::string> out;
    for (int k = 0; k < d; ++k) {
        const std::string& name = model.feature_names[static_cast<std::size_t>(k)];
        if (name.size() < 3 || name.substr(name.size() - 3) != "[t]")
            throw ConfigError("model file: embedded name '" + name + "' is not a lag-0 column");
        out.push_back(name.substr(0, name.size() - 3));
    }
    return out;
}

int run_predict(const PredictArgs& a) {
    const ModelFile mf = load_model_file(a.model_path);
    const CsvTable table = read_csv_file(a.data_path);

    const std::vector<std::string> base = raw_feature_names(mf.model);
    const std::string target_col = a.target_col.empty() ? mf.model.target_name : a.target_col;
    std::vector<std::string> missing;
    for (const auto& name : base) {
        bool found = false;
        for (const auto& h : table.header) found = found || h == name;
        if (!found) missing.push_back(name);
    }
    const bool has_target = [&] {
        for (const auto& h : table.header)
            if (h == target_col) return true;
        return false;
    }();
    if (!has_target && (mf.model.lag.ly > 0 || a.direction_k > 0)) missing.push_back(target_col);
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw ConfigError("data file is missing columns required by the model: " + list);
    }

    ColumnRoles roles;
    roles.features = base;
    roles.timestamp = a.timestamp_col;
    RawSeries series;
    if (has_target) {
        roles.target = target_col;
        series = raw_series_from_csv(table, roles);
        series.target_name = mf.model.target_name; // align lag column names
    } else {
        // no target column and none needed: parse features, zero targets
        if (base.empty()) throw ConfigError("data file has no usable columns for this model");
        roles.target = base[0]; // placeholder to satisfy the loader
        series = raw_series_from_csv(table, roles);
        series.targets.setZero();
        series.target_name = mf.model.target_name;
    }
    if (a.stride > 1) series = subsample_series(series, a.stride);
    if (a.direction_k > 0) series = make_direction_series(series, a.direction_k);

    const SupervisedDataset data = embed_for_model(mf.model, series);
    const bool classify = mf.model.loss != Loss::Squared;
    const bool use_sparse = mf.sparse && !a.use_kernel;
    const VectorXd scores = use_sparse ? predict_sparse(*mf.sparse, data.inputs, a.threads)
                                       : predict_kernel(mf.model, data.inputs, a.threads);

    std::vector<std::string> header;
    const bool has_ts = !data.timestamps.empty();
    if (has_ts) header.push_back("timestamp");
    header.push_back("prediction");
    if (classify) header.push_back("label");

    std::vector<std::vector<std::string>> rows;
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
        std::vector<std::string> row;
        if (has_ts) row.push_back(data.timestamps[static_cast<std::size_t>(i)]);
        row.push_back(format_double(scores(i)));
        if (classify) row.push_back(format_double(classify_score(scores(i))));
        rows.push_back(std::move(row));
    }
    write_table(a.out_path, header, rows);
    std::cerr << "predicted " << scores.size() << " rows using the "
              << (use_sparse ? "sparse" : "kernel") << " form\n";
    return 0;
}

// ----------------------------------------------------------------- explain

struct ExplainArgs {
    std::string model_path;
    std::string out_path;
    int top_k = 20;
    double threshold = 0.0;
    int threads = 1;
};

int run_explain(const ExplainArgs& a) {
    const ModelFile mf = load_model_file(a.model_path);
    ImportanceReport report = rank_features(mf.model, a.threshold, true, a.threads);
    if (a.top_k > 0) report = top_k_report(report, a.top_k);

    std::cout << "rank  coefficient            term\n";
    for (const auto& e : report.entries) {
        std::string coef = format_double(e.coefficient);
        coef.resize(22, ' ');
        std::string rank = std::to_string(e.rank);
        rank.resize(5, ' ');
        std::cout << rank << ' ' << coef << ' ' << e.name << "\n";
    }
    if (report.entries.empty()) std::cout << "(no terms at this threshold)\n";

    if (!a.out_path.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& e : report.entries)
            rows.push_back({std::to_string(e.rank), e.name, exponents_key(e.index),
                            format_double(e.coefficient)});
        write_csv_file(a.out_path, {"rank", "term", "exponents", "coefficient"}, rows);
    }
    return 0;
}

// ----------------------------------------------------------------- perturb

struct PerturbArgs {
    std::string model_path;
    std::string train_path;
    std::string test_path;
    std::string out_path;
    DataOptions data;
    std::string features; // embedded names; empty = top term's first variable
    std::string alphas = "0.5";
    int trials = 10;
    std::uint64_t seed = 0;
    int threads = 1;
};

Eigen::Index bearing_feature(const ImportanceEntry& entry) {
    for (std::size_t k = 0; k < entry.index.exponents.size(); ++k)
        if (entry.index.exponents[k] > 0) return static_cast<Eigen::Index>(k);
    throw ConfigError("perturb: the top-ranked term is constant");
}

int run_perturb(const PerturbArgs& a) {
    const ModelFile mf = load_model_file(a.model_path);
    const SupervisedDataset train = embed_for_model(mf.model, load_series(a.train_path, a.data));
    const SupervisedDataset test = embed_for_model(mf.model, load_series(a.test_path, a.data));

    std::vector<Eigen::Index> features;
    if (split_list(a.features).empty()) {
        const ImportanceReport report = rank_features(mf.model, 0.0, true, a.threads);
        if (report.entries.empty()) throw ConfigError("perturb: model has no ranked terms");
        features.push_back(bearing_feature(report.entries.front()));
    } else {
        for (const auto& name : split_list(a.features)) {
            bool found = false;
            for (std::size_t k = 0; k < test.feature_names.size(); ++k)
                if (test.feature_names[k] == name) {
                    features.push_back(static_cast<Eigen::Index>(k));
                    found = true;
                    break;
                }
            if (!found)
                throw ConfigError("perturb: '" + name + "' is not an embedded feature column");
        }
    }

    const auto rows = perturbation_analysis(train, test, features,
                                            parse_double_list(a.alphas, "--alphas"), a.trials,
                                            a.seed);
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows)
        out.push_back({r.feature_name, format_double(r.alpha),
                       format_double(r.mean_degradation), format_double(r.std_error),
                       r.warned_constant ? "1" : "0"});
    write_table(a.out_path, {"feature", "alpha", "mean_degradation", "std_error",
                             "constant_warning"},
                out);
    return 0;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
    std::string model_path;
    std::string train_path;
    std::string test_path;
    std::string out_path;
    DataOptions data;
    std::string ks = "1..15";
    std::string metric = "accuracy";
    int threads = 1;
};

int run_sweep(const SweepArgs& a) {
    const ModelFile mf = load_model_file(a.model_path);
    const SupervisedDataset train = embed_for_model(mf.model, load_series(a.train_path, a.data));
    const SupervisedDataset test = embed_for_model(mf.model, load_series(a.test_path, a.data));

    const ImportanceReport report = rank_features(mf.model, 0.0, true, a.threads);
    const SweepResult result = sparsity_accuracy_sweep(
        mf.model, report, train, test, parse_int_list(a.ks, "--ks"),
        sweep_metric_from_string(a.metric), a.threads);

    std::vector<std::vector<std::string>> rows;
    for (const auto& r : result.rows)
        rows.push_back({std::to_string(r.k), std::to_string(r.k_used), format_double(r.score)});
    write_table(a.out_path, {"k", "k_used", a.metric}, rows);
    if (result.clamped)
        std::cerr << "warning: some k exceeded the " << report.entries.size()
                  << " available terms and were clamped\n";
    std::cerr << "max_fluctuation: " << format_double(result.max_fluctuation) << "\n";
    return 0;
}

// -------------------------------------------------------------------- warn

struct WarnArgs {
    std::string model_path;
    std::string train_path;
    std::string test_path;
    std::string out_rules;
    std::string out_metrics;
    std::string out_episodes;
    std::string save_model;
    DataOptions data;
    int depth = 2;
    int pool_size = 3;
    int min_leaf = 5;
    int rules_precision = 6;
    int threads = 1;
};

int run_warn(const WarnArgs& a) {
    const ModelFile mf = load_model_file(a.model_path);
    const SupervisedDataset train = embed_for_model(mf.model, load_series(a.train_path, a.data));
    const SupervisedDataset test = embed_for_model(mf.model, load_series(a.test_path, a.data));

    const ImportanceReport report = rank_features(mf.model, 0.0, true, a.threads);
    if (report.entries.empty()) throw ConfigError("warn: model has no ranked terms");
    const int pool_size = std::min<int>(a.pool_size, static_cast<int>(report.entries.size()));
    if (pool_size < a.pool_size)
        std::cerr << "warning: pool clamped to the " << pool_size << " available terms\n";

    std::vector<MultiIndex> pool_terms;
    std::vector<std::string> pool_names;
    for (int i = 0; i < pool_size; ++i) {
        pool_terms.push_back(report.entries[static_cast<std::size_t>(i)].index);
        pool_names.push_back(report.entries[static_cast<std::size_t>(i)].name);
    }

    const MatrixXd train_terms =
        monomial_features(train.inputs, mf.model.scaling, pool_terms, a.threads);
    const MatrixXd test_terms =
        monomial_features(test.inputs, mf.model.scaling, pool_terms, a.threads);

    const WarningTree tree = build_warning_tree(train_terms, train.targets, pool_terms,
                                                pool_names, a.depth, a.min_leaf);
    const std::string rules = render_rules(tree, a.rules_precision);
    const WarningMetrics metrics = evaluate_warning(tree, test_terms, test.targets);
    const auto episodes = consecutive_warning_horizon(tree, test_terms, test.targets);

    std::cout << rules;
    std::cout << "tp: " << metrics.tp << "  fp: " << metrics.fp << "  tn: " << metrics.tn
              << "  fn: " << metrics.fn << "\n"
              << "precision: " << format_double(metrics.precision)
              << (metrics.precision_defined ? "" : " (undefined, no alarms raised)")
              << "  recall: " << format_double(metrics.recall)
              << (metrics.recall_defined ? "" : " (undefined, no abnormal rows)") << "\n"
              << "f1: " << format_double(metrics.f1)
              << "  accuracy: " << format_double(metrics.accuracy) << "\n";
    for (const auto& ep : episodes)
        std::cout << "episode start_row: " << ep.start << "  horizon: " << ep.length
                  << "  after_normal: " << (ep.follows_normal ? 1 : 0) << "\n";

    if (!a.out_rules.empty()) {
        std::ofstream out(a.out_rules, std::ios::binary);
        if (!out) throw ConfigError("cannot open '" + a.out_rules + "' for writing");
        out << rules;
    }
    if (!a.out_metrics.empty())
        write_csv_file(a.out_metrics,
                       {"tp", "fp", "tn", "fn", "precision", "recall", "f1", "accuracy"},
                       {{std::to_string(metrics.tp), std::to_string(metrics.fp),
                         std::to_string(metrics.tn), std::to_string(metrics.fn),
                         format_double(metrics.precision), format_double(metrics.recall),
                         format_double(metrics.f1), format_double(metrics.accuracy)}});
    if (!a.out_episodes.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& ep : episodes)
            rows.push_back({std::to_string(ep.start), std::to_string(ep.length),
                            ep.follows_normal ? "1" : "0"});
        write_csv_file(a.out_episodes, {"start_row", "horizon", "after_normal"}, rows);
    }
    if (!a.save_model.empty()) {
        ModelFile updated = mf;
        updated.tree = tree;
        save_model_file(a.save_model, updated);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpretable polynomial learning for time series"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file (flags win)");
    app.allow_config_extras(CLI::config_extras_mode::error);

    int threads = 1;
    app.add_option("--threads", threads, "Worker threads (results are thread-count independent)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Generate the simulated forecasting benchmark");
    c_sim->add_option("--out-train", sim.out_train, "Training CSV path")->required();
    c_sim->add_option("--out-test", sim.out_test, "Test CSV path")->required();
    c_sim->add_option("--out-truth", sim.out_truth, "Ground-truth coefficient CSV path");
    c_sim->add_option("--seed", sim.seed, "Generator seed")->required();
    c_sim->add_option("--t-train", sim.t_train, "Training rows")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_sim->add_option("--t-test", sim.t_test, "Test rows")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    c_sim->add_option("--noise-sd", sim.noise_sd, "Training noise standard deviation")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    c_sim->add_flag("--temporal,!--no-temporal", sim.temporal,
                    "Include the autoregressive cos*sin term (default on)");
    c_sim->add_flag("--add-irrelevant", sim.add_irrelevant,
                    "Append an irrelevant uniform feature x6");

    FitArgs fit;
    auto* c_fit = app.add_subcommand("fit", "Fit a polynomial model to a CSV series");
    c_fit->add_option("--data", fit.data_path, "Training CSV")->required();
    c_fit->add_option("--out", fit.out_path, "Model file to write")->required();
    add_data_options(c_fit, fit.data, true);
    add_model_options(c_fit, fit.model);

    PredictArgs pred;
    auto* c_pred = app.add_subcommand("predict", "Score a CSV with a fitted model");
    c_pred->add_option("--model", pred.model_path, "Model file")->required();
    c_pred->add_option("--data", pred.data_path, "Input CSV")->required();
    c_pred->add_option("--out", pred.out_path, "Predictions CSV (default: stdout)");
    c_pred->add_option("--target-col", pred.target_col,
                       "Column holding past target values (default: the model's target name)");
    c_pred->add_option("--timestamp-col", pred.timestamp_col, "Timestamp column to carry through");
    c_pred->add_option("--stride", pred.stride, "Keep every stride-th row")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_pred->add_option("--direction-k", pred.direction_k,
                       "Derive +1/-1 k-step direction labels from the target column first")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    c_pred->add_flag("--use-kernel", pred.use_kernel,
                     "Score with the kernel form even when a sparse form is stored");

    ExplainArgs expl;
    auto* c_expl = app.add_subcommand("explain", "Rank terms of a fitted model by importance");
    c_expl->add_option("--model", expl.model_path, "Model file")->required();
    c_expl->add_option("--out", expl.out_path, "Machine-readable CSV path");
    c_expl->add_option("--top-k", expl.top_k, "Show this many terms (0 = all)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    c_expl->add_option("--threshold", expl.threshold, "Drop terms with |coefficient| below this")
        ->capture_default_str();

    PerturbArgs pert;
    auto* c_pert = app.add_subcommand(
        "perturb", "Measure test-MSE degradation from noising one feature at a time");
    c_pert->add_option("--model", pert.model_path, "Model file")->required();
    c_pert->add_option("--train", pert.train_path, "Training CSV")->required();
    c_pert->add_option("--test", pert.test_path, "Test CSV")->required();
    c_pert->add_option("--out", pert.out_path, "Result CSV (default: stdout)");
    add_data_options(c_pert, pert.data, true);
    c_pert->add_option("--features", pert.features,
                       "Embedded columns to perturb (default: top term's first variable)");
    c_pert->add_option("--alphas", pert.alphas, "Perturbation levels")->capture_default_str();
    c_pert->add_option("--trials", pert.trials, "Noise draws per (feature, alpha)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_pert->add_option("--seed", pert.seed, "Noise seed")->required();

    SweepArgs sweep;
    auto* c_sweep = app.add_subcommand(
        "sweep", "Classification score of the top-k ranked terms for each k");
    c_sweep->add_option("--model", sweep.model_path, "Model file")->required();
    c_sweep->add_option("--train", sweep.train_path, "Training CSV")->required();
    c_sweep->add_option("--test", sweep.test_path, "Test CSV")->required();
    c_sweep->add_option("--out", sweep.out_path, "Result CSV (default: stdout)");
    add_data_options(c_sweep, sweep.data, true);
    c_sweep->add_option("--ks", sweep.ks, "k values, e.g. 1,2,5 or 1..15")
        ->capture_default_str();
    c_sweep->add_option("--metric", sweep.metric, "Score to report")
        ->check(CLI::IsMember({"accuracy", "auc"}))
        ->capture_default_str();

    WarnArgs warn;
    auto* c_warn = app.add_subcommand(
        "warn", "Build and evaluate an early-warning rule tree on top-ranked terms");
    c_warn->add_option("--model", warn.model_path, "Model file")->required();
    c_warn->add_option("--train", warn.train_path, "Training CSV")->required();
    c_warn->add_option("--test", warn.test_path, "Test CSV")->required();
    c_warn->add_option("--out-rules", warn.out_rules, "Write the rule text here");
    c_warn->add_option("--out-metrics", warn.out_metrics, "Write the metrics CSV here");
    c_warn->add_option("--out-episodes", warn.out_episodes, "Write the episode CSV here");
    c_warn->add_option("--save-model", warn.save_model,
                       "Write a copy of the model file with the tree embedded");
    add_data_options(c_warn, warn.data, true);
    c_warn->add_option("--depth", warn.depth, "Tree depth limit")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    c_warn->add_option("--pool-size", warn.pool_size, "Top-ranked terms the tree may split on")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_warn->add_option("--min-leaf", warn.min_leaf, "Minimum rows per leaf")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_warn->add_option("--rules-precision", warn.rules_precision,
                       "Significant digits for rendered thresholds")
        ->check(CLI::Range(1, 17))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        fit.threads = threads;
        pred.threads = threads;
        expl.threads = threads;
        pert.threads = threads;
        sweep.threads = threads;
        warn.threads = threads;
        if (app.got_subcommand(c_sim)) return run_simulate(sim);
        if (app.got_subcommand(c_fit)) return run_fit(fit);
        if (app.got_subcommand(c_pred)) return run_predict(pred);
        if (app.got_subcommand(c_expl)) return run_explain(expl);
        if (app.got_subcommand(c_pert)) return run_perturb(pert);
        if (app.got_subcommand(c_sweep)) return run_sweep(sweep);
        if (app.got_subcommand(c_warn)) return run_warn(warn);
        throw ConfigError("no subcommand given");
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
