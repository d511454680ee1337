#include "mvgl/cli.hpp"

#include "mvgl/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace mvgl::cli {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

int exit_code(ErrorCategory category) noexcept
{
    switch (category) {
    case ErrorCategory::Config: return kExitConfig;
    case ErrorCategory::Data: return kExitData;
    case ErrorCategory::Numerical: return kExitNumerical;
    }
    return 1;
}

std::string to_string(SweepVariable v)
{
    switch (v) {
    case SweepVariable::Views: return "N";
    case SweepVariable::Samples: return "p";
    case SweepVariable::Noise: return "eta";
    case SweepVariable::Nodes: return "n";
    }
    return "?";
}

void BenchConfig::validate() const
{
    if (values.empty()) throw InvalidConfig("bench: sweep values must be nonempty");
    if (seeds < 1) throw InvalidConfig("bench: seeds must be >= 1");
    if (methods.empty()) throw InvalidConfig("bench: methods must be nonempty");
    solver.validate();
    for (const double v : values) realization_config(*this, v, 0).validate();
}

datagen::SimulationConfig realization_config(const BenchConfig& config, double value, int seed_index)
{
    auto c = config.simulation;
    auto as_int = [&](const char* name) {
        if (value != std::floor(value)) throw InvalidConfig(std::string("bench: ") + name + " values must be integers");
        return static_cast<int>(value);
    };
    switch (config.sweep) {
    case SweepVariable::Views: c.views = as_int("N"); break;
    case SweepVariable::Samples: c.samples = as_int("p"); break;
    case SweepVariable::Noise: c.noise = value; break;
    case SweepVariable::Nodes: c.n = as_int("n"); break;
    }
    c.seed = config.simulation.seed + static_cast<std::uint64_t>(seed_index);
    return c;
}

namespace {

template <typename T>
T get(const json& j, const std::string& key, const std::string& where)
{
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidConfig(where + ": field '" + key + "' has the wrong type");
    }
}

void read_solver(const json& j, SolverOptions& s)
{
    if (!j.is_object()) throw InvalidConfig("solver must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "max_iter") s.max_admm_iter = get<int>(j, key, "solver");
        else if (key == "bcd_max_iter") s.max_bcd_iter = get<int>(j, key, "solver");
        else if (key == "eps_abs") s.eps_abs = get<double>(j, key, "solver");
        else if (key == "eps_rel") s.eps_rel = get<double>(j, key, "solver");
        else if (key == "bcd_tol") s.bcd_tol = get<double>(j, key, "solver");
        else if (key == "adaptive_rho") s.adaptive_rho = get<bool>(j, key, "solver");
        else if (key == "normalize_by_samples") s.normalize_by_samples = get<bool>(j, key, "solver");
        else throw InvalidConfig("unknown solver field '" + key + "'");
    }
}

void read_tuning(const json& j, pipeline::TuningProtocol& t)
{
    if (!j.is_object()) throw InvalidConfig("tuning must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "alpha_grid") {
            if (value.is_object()) {
                t.alpha_grid = eval::log_grid(get<double>(value, "low", "alpha_grid"),
                                              get<double>(value, "high", "alpha_grid"),
                                              get<int>(value, "points", "alpha_grid"));
            } else {
                t.alpha_grid = get<std::vector<double>>(j, key, "tuning");
            }
        } else if (key == "alpha") t.fixed.alpha = get<double>(j, key, "tuning");
        else if (key == "beta") t.fixed.beta = get<double>(j, key, "tuning");
        else if (key == "gamma") t.fixed.gamma = get<double>(j, key, "tuning");
        else if (key == "rho") t.fixed.rho = get<double>(j, key, "tuning");
        else if (key == "beta_target") {
            if (value.is_null()) t.beta_target.reset();
            else t.beta_target = get<double>(j, key, "tuning");
        } else if (key == "beta_tolerance") t.beta_tolerance = get<double>(j, key, "tuning");
        else if (key == "gamma_search") {
            if (get<bool>(j, key, "tuning")) {
                if (!t.gamma_search) t.gamma_search = eval::GammaSearch{};
            } else {
                t.gamma_search.reset();
            }
        } else if (key == "gamma_multipliers") {
            if (!t.gamma_search) t.gamma_search = eval::GammaSearch{};
            t.gamma_search->multipliers = get<std::vector<double>>(j, key, "tuning");
        } else if (key == "gamma_f1_slack") {
            if (!t.gamma_search) t.gamma_search = eval::GammaSearch{};
            t.gamma_search->f1_slack = get<double>(j, key, "tuning");
        } else {
            throw InvalidConfig("unknown tuning field '" + key + "'");
        }
    }
    t.fixed.validate();
}

SweepVariable parse_sweep(const std::string& s)
{
    if (s == "N" || s == "views") return SweepVariable::Views;
    if (s == "p" || s == "samples") return SweepVariable::Samples;
    if (s == "eta" || s == "noise") return SweepVariable::Noise;
    if (s == "n" || s == "nodes") return SweepVariable::Nodes;
    throw InvalidConfig("bench: sweep must be one of N, p, eta, n (got '" + s + "')");
}

} // namespace

BenchConfig bench_config_from_json(const json& j)
{
    if (!j.is_object()) throw InvalidConfig("bench config must be a JSON object");
    BenchConfig c;
    c.solver.adaptive_rho = true;
    c.solver.record_history = false;
    for (const auto& [key, value] : j.items()) {
        if (key == "sweep") c.sweep = parse_sweep(get<std::string>(j, key, "bench"));
        else if (key == "values") c.values = get<std::vector<double>>(j, key, "bench");
        else if (key == "seeds") c.seeds = get<int>(j, key, "bench");
        else if (key == "methods") {
            c.methods.clear();
            for (const auto& m : get<std::vector<std::string>>(j, key, "bench")) c.methods.push_back(eval::parse_method(m));
        } else if (key == "simulation") c.simulation = io::simulation_config_from_json(value);
        else if (key == "solver") read_solver(value, c.solver);
        else if (key == "tuning") read_tuning(value, c.tuning);
        else throw InvalidConfig("unknown bench field '" + key + "'");
    }
    c.validate();
    return c;
}

std::vector<BenchRun> run_bench(const BenchConfig& config, int threads)
{
    config.validate();
    const std::size_t seeds = static_cast<std::size_t>(config.seeds);
    const std::size_t tasks = config.values.size() * seeds;
    std::vector<std::vector<pipeline::MethodRun>> results(tasks);

    auto task = [&](std::size_t t) {
        const double value = config.values[t / seeds];
        const int s = static_cast<int>(t % seeds);
        try {
            const auto data = datagen::simulate(realization_config(config, value, s));
            return pipeline::run_realization(data, config.methods, config.tuning, config.solver);
        } catch (const std::exception& e) {
            std::vector<pipeline::MethodRun> failed;
            for (const auto m : config.methods) {
                pipeline::MethodRun r;
                r.method = m;
                r.error = e.what();
                failed.push_back(std::move(r));
            }
            return failed;
        }
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks;) results[t] = task(t);
    };
    const int pool_size = std::max(1, std::min(threads, static_cast<int>(tasks)));
    std::vector<std::thread> pool;
    for (int i = 1; i < pool_size; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<BenchRun> out;
    for (std::size_t v = 0; v < config.values.size(); ++v) {
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
            for (std::size_t s = 0; s < seeds; ++s) {
                BenchRun r;
                r.value = config.values[v];
                r.seed = realization_config(config, r.value, static_cast<int>(s)).seed;
                r.run = results[v * seeds + s][m];
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

namespace {

std::pair<double, double> mean_ci(const std::vector<double>& xs)
{
    if (xs.empty()) return {std::nan(""), std::nan("")};
    const double k = static_cast<double>(xs.size());
    double mean = 0.0;
    for (const double x : xs) mean += x;
    mean /= k;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (const double x : xs) ss += (x - mean) * (x - mean);
    return {mean, 1.96 * std::sqrt(ss / (k - 1.0)) / std::sqrt(k)};
}

std::string cell(double x) { return std::isnan(x) ? std::string() : io::format_double(x); }

std::string cell(const std::optional<double>& x) { return x ? cell(*x) : std::string(); }

std::string quoted(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

} // namespace

std::vector<BenchRow> summarize(const BenchConfig& config, const std::vector<BenchRun>& runs)
{
    std::vector<BenchRow> rows;
    for (const double value : config.values) {
        for (const auto method : config.methods) {
            BenchRow row;
            row.value = value;
            row.method = method;
            std::vector<double> f1v, f1c, wall;
            for (const auto& r : runs) {
                if (r.value != value || r.run.method != method) continue;
                ++row.seeds;
                if (!r.run.error.empty()) {
                    ++row.failed;
                    continue;
                }
                f1v.push_back(r.run.metrics.f1_view);
                if (r.run.metrics.f1_consensus) f1c.push_back(*r.run.metrics.f1_consensus);
                wall.push_back(r.run.wall_seconds);
            }
            std::tie(row.mean_f1_view, row.ci_f1_view) = mean_ci(f1v);
            if (!f1c.empty()) {
                const auto [m, ci] = mean_ci(f1c);
                row.mean_f1_consensus = m;
                row.ci_f1_consensus = ci;
            }
            row.mean_wall_seconds = mean_ci(wall).first;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string bench_csv(const BenchConfig& config, const std::vector<BenchRow>& rows)
{
    std::ostringstream os;
    os << "sweep,value,method,seeds,failed,mean_f1_view,ci95_f1_view,mean_f1_consensus,ci95_f1_consensus,"
          "mean_wall_seconds\n";
    for (const auto& r : rows) {
        os << to_string(config.sweep) << ',' << io::format_double(r.value) << ',' << eval::to_string(r.method) << ','
           << r.seeds << ',' << r.failed << ',' << cell(r.mean_f1_view) << ',' << cell(r.ci_f1_view) << ','
           << cell(r.mean_f1_consensus) << ',' << cell(r.ci_f1_consensus) << ',' << cell(r.mean_wall_seconds)
           << '\n';
    }
    return os.str();
}

std::string runs_csv(const BenchConfig& config, const std::vector<BenchRun>& runs)
{
    std::ostringstream os;
    os << "sweep,value,method,seed,alpha,beta,gamma,rho,f1_view,f1_consensus,mean_pairwise_corr,iterations,"
          "converged,beta_attained,wall_seconds,error\n";
    for (const auto& b : runs) {
        const auto& r = b.run;
        os << to_string(config.sweep) << ',' << io::format_double(b.value) << ',' << eval::to_string(r.method) << ','
           << b.seed << ',';
        if (r.error.empty()) {
            os << io::format_double(r.hyper.alpha) << ',' << io::format_double(r.hyper.beta) << ','
               << io::format_double(r.hyper.gamma) << ',' << io::format_double(r.hyper.rho) << ','
               << io::format_double(r.metrics.f1_view) << ',' << cell(r.metrics.f1_consensus) << ','
               << io::format_double(r.metrics.mean_pairwise_corr) << ',' << r.iterations << ','
               << (r.converged ? 1 : 0) << ',' << (r.beta_attained ? 1 : 0) << ','
               << io::format_double(r.wall_seconds) << ",\n";
        } else {
            os << ",,,,,,,,,,," << quoted(r.error) << '\n';
        }
    }
    return os.str();
}

namespace {

struct SolverFlags {
    CLI::Option* alpha = nullptr;
    CLI::Option* beta = nullptr;
    CLI::Option* gamma = nullptr;
    CLI::Option* rho = nullptr;
    CLI::Option* max_iter = nullptr;
    CLI::Option* bcd_max_iter = nullptr;
    CLI::Option* eps_abs = nullptr;
    CLI::Option* eps_rel = nullptr;
    CLI::Option* adaptive = nullptr;
    Hyperparameters hyper;
    SolverOptions options;
    bool adaptive_rho = false;

    void add(CLI::App* app)
    {
        alpha = app->add_option("--alpha", hyper.alpha, "Frobenius weight")->capture_default_str();
        beta = app->add_option("--beta", hyper.beta, "Consensus coupling")->capture_default_str();
        gamma = app->add_option("--gamma", hyper.gamma, "Consensus sparsity (l2 model)")->capture_default_str();
        rho = app->add_option("--rho", hyper.rho, "ADMM penalty")->capture_default_str();
        max_iter = app->add_option("--max-iter", options.max_admm_iter, "ADMM iterations")->capture_default_str();
        bcd_max_iter = app->add_option("--bcd-max-iter", options.max_bcd_iter, "BCD sweeps per iteration")
                           ->capture_default_str();
        eps_abs = app->add_option("--eps-abs", options.eps_abs)->capture_default_str();
        eps_rel = app->add_option("--eps-rel", options.eps_rel)->capture_default_str();
        adaptive = app->add_flag("--adaptive-rho", adaptive_rho, "Residual-balancing rho updates");
    }

    void merge_into(json& solver, json& tuning) const
    {
        if (*max_iter) solver["max_iter"] = options.max_admm_iter;
        if (*bcd_max_iter) solver["bcd_max_iter"] = options.max_bcd_iter;
        if (*eps_abs) solver["eps_abs"] = options.eps_abs;
        if (*eps_rel) solver["eps_rel"] = options.eps_rel;
        if (*adaptive) solver["adaptive_rho"] = adaptive_rho;
        if (*rho) tuning["rho"] = hyper.rho;
        if (*alpha) {
            tuning["alpha"] = hyper.alpha;
            tuning["alpha_grid"] = json::array();
        }
        if (*beta) {
            tuning["beta"] = hyper.beta;
            tuning["beta_target"] = nullptr;
        }
        if (*gamma) {
            tuning["gamma"] = hyper.gamma;
            tuning["gamma_search"] = false;
        }
    }
};

int resolve_threads(const CLI::Option* flag, int value)
{
    if (flag && *flag) {
        if (value < 0) throw InvalidConfig("--threads must be >= 0");
    } else if (const char* env = std::getenv("MVGL_THREADS"); env && *env) {
        try {
            std::size_t used = 0;
            value = std::stoi(env, &used);
            if (env[used] != '\0' || value < 0) throw std::invalid_argument(env);
        } catch (const std::exception&) {
            throw InvalidConfig(std::string("MVGL_THREADS must be a nonnegative integer, got '") + env + "'");
        }
    } else {
        value = 1;
    }
    if (value == 0) value = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return value;
}

ordered_json report_json(const ConvergenceReport& r)
{
    ordered_json j;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["final_rho"] = r.final_rho;
    j["primal_residual"] = r.primal_residual;
    j["dual_residual"] = r.dual_residual;
    j["objective"] = r.objective;
    return j;
}

ordered_json trace_json(const eval::TuneResult& t)
{
    ordered_json trace = ordered_json::array();
    for (const auto& p : t.trace) trace.push_back({p.value, p.statistic});
    return trace;
}

void cmd_simulate(const std::string& config_path, const std::vector<std::string>& sets, const CLI::Option* seed_flag,
                  std::uint64_t seed, const std::string& out_dir, std::ostream& out)
{
    json j = config_path.empty() ? json::object() : io::read_json(config_path);
    for (const auto& s : sets) io::apply_override(j, s);
    if (*seed_flag) j["seed"] = seed;
    const auto config = io::simulation_config_from_json(j);
    const auto data = datagen::simulate(config);
    io::write_dataset(out_dir, config, data);
    out << "wrote " << config.views << " views (n=" << config.n << ", p=" << config.samples << ") to " << out_dir
        << '\n';
}

void cmd_learn(const std::string& dataset_dir, const std::string& model, SolverFlags flags,
               const CLI::Option* tune_flag, double tune_target, const CLI::Option* density_flag, double density,
               bool normalize, const std::string& out_dir, std::ostream& out)
{
    const auto method = eval::parse_method(model);
    auto h = flags.hyper;
    auto options = flags.options;
    options.adaptive_rho = flags.adaptive_rho;
    options.normalize_by_samples = normalize;
    h.validate();
    options.validate();

    const auto dataset = io::read_dataset(dataset_dir);
    const auto datasets = pipeline::datasets_from(dataset.signals);

    ordered_json tuning = ordered_json::object();
    if (*density_flag) {
        const auto grid = eval::log_grid(0.1, 100.0, 13);
        const auto r = eval::grid_search_alpha_density(datasets, method, h, grid, density, options);
        h.alpha = r.value;
        tuning["alpha"] = {{"target_density", density}, {"achieved", r.achieved}, {"attained", r.attained},
                           {"trace", trace_json(r)}};
    }
    if (*tune_flag) {
        if (method == eval::Method::Single) throw InvalidConfig("--tune-beta needs a multiview model");
        eval::BetaSearch search;
        search.target = tune_target;
        const auto r = eval::tune_beta(datasets, method, h, options, search);
        h.beta = r.value;
        tuning["beta"] = {{"target", tune_target},
                          {"tolerance", search.tolerance},
                          {"achieved", r.achieved},
                          {"attained", r.attained},
                          {"monotonicity_violations", r.monotonicity_violations},
                          {"trace", trace_json(r)}};
    }

    const auto start = std::chrono::steady_clock::now();
    const auto learned = eval::learn(datasets, method, h, options);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw InvalidData("cannot create " + out_dir + ": " + ec.message());
    const fs::path dir(out_dir);
    for (std::size_t i = 0; i < learned.views.size(); ++i) {
        io::write_edge_list(dir / io::learned_view_file(static_cast<int>(i)), learned.views[i]);
    }
    if (learned.consensus) io::write_edge_list(dir / "learned_consensus.tsv", *learned.consensus);

    ordered_json report;
    report["method"] = std::string(eval::to_string(method));
    report["nodes"] = dataset.config.n;
    report["views"] = learned.views.size();
    report["hyperparameters"] = {{"alpha", h.alpha}, {"beta", h.beta}, {"gamma", h.gamma}, {"rho", h.rho}};
    report["options"] = {{"max_iter", options.max_admm_iter}, {"bcd_max_iter", options.max_bcd_iter},
                         {"eps_abs", options.eps_abs},        {"eps_rel", options.eps_rel},
                         {"bcd_tol", options.bcd_tol},        {"adaptive_rho", options.adaptive_rho},
                         {"normalize_by_samples", options.normalize_by_samples}};
    if (!tuning.empty()) report["tuning"] = tuning;
    if (learned.views.size() >= 2) report["mean_pairwise_corr"] = eval::pairwise_correlation(learned.views);
    int iterations = 0;
    bool converged = true;
    ordered_json solves = ordered_json::array();
    for (const auto& r : learned.reports) {
        iterations = std::max(iterations, r.iterations);
        converged = converged && r.converged;
        solves.push_back(report_json(r));
    }
    report["iterations"] = iterations;
    report["converged"] = converged;
    report["wall_seconds"] = wall;
    report["solves"] = solves;
    io::write_json(dir / "report.json", report);

    out << eval::to_string(method) << ": " << learned.views.size() << " views, " << iterations << " iterations, "
        << (converged ? "converged" : "not converged") << ", wrote " << out_dir << '\n';
}

void cmd_eval(const std::string& learned_dir, const std::string& truth_dir, const CLI::Option* density_flag,
              double density, const std::string& out_file, std::ostream& out)
{
    const auto truth = io::read_truth(truth_dir);
    const int n = truth.consensus.nodes();
    const fs::path dir(learned_dir);
    eval::LearnResult learned;
    for (std::size_t i = 0; i < truth.views.size(); ++i) {
        learned.views.push_back(io::read_edge_list(dir / io::learned_view_file(static_cast<int>(i)), n));
    }
    if (fs::exists(dir / "learned_consensus.tsv")) learned.consensus = io::read_edge_list(dir / "learned_consensus.tsv", n);
    const auto rule = *density_flag ? eval::BinarizeRule::density(density, n) : eval::BinarizeRule{};
    const auto metrics = eval::score(learned, truth, rule);
    const auto text = metrics.to_json();
    out << text << '\n';
    const fs::path target = out_file.empty() ? dir / "metrics.json" : fs::path(out_file);
    io::write_json(target, ordered_json::parse(text));
}

void cmd_bench(const std::string& config_path, const std::vector<std::string>& sets, const SolverFlags& flags,
               const CLI::Option* seed_flag, std::uint64_t seed, int threads, const std::string& out_dir,
               std::ostream& out)
{
    json j = config_path.empty() ? json::object() : io::read_json(config_path);
    for (const auto& s : sets) io::apply_override(j, s);
    json solver = j.value("solver", json::object());
    json tuning = j.value("tuning", json::object());
    flags.merge_into(solver, tuning);
    if (!solver.empty()) j["solver"] = solver;
    if (!tuning.empty()) j["tuning"] = tuning;
    if (*seed_flag) j["simulation"]["seed"] = seed;
    const auto config = bench_config_from_json(j);

    const auto runs = run_bench(config, threads);
    const auto rows = summarize(config, runs);
    const auto summary = bench_csv(config, rows);
    if (out_dir.empty()) {
        out << summary;
        return;
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw InvalidData("cannot create " + out_dir + ": " + ec.message());
    const fs::path dir(out_dir);
    for (const auto& [name, text] : {std::pair{"bench.csv", summary}, std::pair{"bench_runs.csv", runs_csv(config, runs)}}) {
        std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
        if (!(f << text)) throw InvalidData("cannot write " + (dir / name).string());
    }
    io::write_json(dir / "bench_config.json", ordered_json::parse(j.dump()));
    int failed = 0;
    for (const auto& r : rows) failed += r.failed;
    out << "wrote " << rows.size() << " rows to " << (dir / "bench.csv").string();
    if (failed) out << " (" << failed << " failed runs)";
    out << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multiview graph learning from smooth signals"};
    app.name("mvgl");
    app.require_subcommand(1);

    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string config_path, out_dir, dataset_dir, learned_dir, truth_dir, model = "l1", out_file;
    double tune_target = 0.8, density = 0.15;
    bool normalize = false;

    auto* sim = app.add_subcommand("simulate", "Generate a synthetic multiview dataset");
    sim->add_option("config", config_path, "JSON simulation config")->check(CLI::ExistingFile);
    sim->add_option("--set", sets, "Config override key=value (repeatable)")->allow_extra_args(false);
    auto* sim_seed = sim->add_option("--seed", seed, "Random seed");
    sim->add_option("--out", out_dir, "Output dataset directory")->required();

    auto* learn = app.add_subcommand("learn", "Learn view (and consensus) graphs from a dataset");
    learn->add_option("dataset", dataset_dir, "Dataset directory")->required();
    learn->add_option("--model", model, "l1, l2, l2_noreg or single")->capture_default_str();
    SolverFlags learn_flags;
    learn_flags.add(learn);
    auto* tune_flag = learn->add_option("--tune-beta", tune_target, "Tune beta to this mean pairwise correlation");
    auto* density_flag = learn->add_option("--target-density", density, "Pick alpha for this edge density");
    learn->add_flag("--normalize", normalize, "Divide k and d by the sample count");
    learn->add_option("--out", out_dir, "Output directory")->required();
    auto* learn_threads = learn->add_option("--threads", threads, "Worker threads (0 = all cores)");

    auto* ev = app.add_subcommand("eval", "Score learned graphs against the ground truth");
    ev->add_option("learned", learned_dir, "Directory written by learn")->required();
    ev->add_option("truth", truth_dir, "Dataset directory with truth files")->required();
    auto* eval_density = ev->add_option("--target-density", density, "Top-K binarization at this density");
    ev->add_option("--out", out_file, "Metrics file (default <learned>/metrics.json)");

    auto* bench = app.add_subcommand("bench", "Sweep simulate-tune-learn-eval and write CSV");
    bench->add_option("config", config_path, "JSON bench config")->check(CLI::ExistingFile);
    bench->add_option("--set", sets, "Config override key=value (repeatable)")->allow_extra_args(false);
    SolverFlags bench_flags;
    bench_flags.add(bench);
    auto* bench_seed = bench->add_option("--seed", seed, "Base seed");
    auto* bench_threads = bench->add_option("--threads", threads, "Worker threads (0 = all cores)");
    bench->add_option("--out", out_dir, "Output directory (default: summary to stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    try {
        if (*sim) {
            cmd_simulate(config_path, sets, sim_seed, seed, out_dir, out);
        } else if (*learn) {
            resolve_threads(learn_threads, threads);
            cmd_learn(dataset_dir, model, learn_flags, tune_flag, tune_target, density_flag, density, normalize,
                      out_dir, out);
        } else if (*ev) {
            cmd_eval(learned_dir, truth_dir, eval_density, density, out_file, out);
        } else if (*bench) {
            cmd_bench(config_path, sets, bench_flags, bench_seed, seed, resolve_threads(bench_threads, threads),
                      out_dir, out);
        }
    } catch (const Error& e) {
        err << "mvgl: " << e.what() << '\n';
        return exit_code(e.category());
    } catch (const fs::filesystem_error& e) {
        err << "mvgl: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

} // namespace mvgl::cli
