#pragma once

#include "mvgl/errors.hpp"
#include "mvgl/pipeline.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace mvgl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumerical = 4;

int exit_code(ErrorCategory category) noexcept;

/// Runs the tool with args excluding the program name; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

enum class SweepVariable { Views, Samples, Noise, Nodes };

struct BenchConfig {
    SweepVariable sweep = SweepVariable::Views;
    std::vector<double> values = {3, 6, 9, 12};
    int seeds = 10;
    std::vector<eval::Method> methods = {eval::Method::Single, eval::Method::MvglL1, eval::Method::MvglL2};
    datagen::SimulationConfig simulation{};
    SolverOptions solver{};
    pipeline::TuningProtocol tuning{};

    void validate() const;
};

/// Keys: sweep ("N", "p", "eta", "n"), values, seeds, methods, simulation
/// (as for simulate), solver, tuning. Missing keys keep the defaults; the
/// solver defaults to adaptive rho.
BenchConfig bench_config_from_json(const nlohmann::json& j);

std::string to_string(SweepVariable v);

/// Realization s at a sweep point uses simulation.seed + s.
datagen::SimulationConfig realization_config(const BenchConfig& config, double value, int seed_index);

struct BenchRun {
    double value = 0.0;
    std::uint64_t seed = 0;
    pipeline::MethodRun run;
};

struct BenchRow {
    double value = 0.0;
    eval::Method method = eval::Method::Single;
    int seeds = 0;
    int failed = 0;
    double mean_f1_view = 0.0;
    double ci_f1_view = 0.0;
    std::optional<double> mean_f1_consensus;
    std::optional<double> ci_f1_consensus;
    double mean_wall_seconds = 0.0;
};

/// Runs every (sweep value, seed) realization on a pool of threads. Runs come
/// back ordered by sweep value, method, seed regardless of scheduling.
std::vector<BenchRun> run_bench(const BenchConfig& config, int threads);

/// One row per (sweep value, method); CI half-width is 1.96 * stderr.
std::vector<BenchRow> summarize(const BenchConfig& config, const std::vector<BenchRun>& runs);

std::string bench_csv(const BenchConfig& config, const std::vector<BenchRow>& rows);
std::string runs_csv(const BenchConfig& config, const std::vector<BenchRun>& runs);

} // namespace mvgl::cli
