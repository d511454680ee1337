#include "mvgl/pipeline.hpp"

#include "mvgl/errors.hpp"

#include <chrono>

namespace mvgl::pipeline {

std::vector<ViewDataset> datasets_from(const std::vector<Matrix>& signals)
{
    std::vector<ViewDataset> out;
    out.reserve(signals.size());
    for (const auto& X : signals) out.push_back(precompute_statistics(X));
    return out;
}

namespace {

MethodRun finish(eval::Method method, const Hyperparameters& hyper, const std::vector<ViewDataset>& datasets,
                 const datagen::GroundTruth& truth, const SolverOptions& options)
{
    MethodRun run;
    run.method = method;
    run.hyper = hyper;
    const auto start = std::chrono::steady_clock::now();
    const auto learned = eval::learn(datasets, method, hyper, options);
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    run.metrics = eval::score(learned, truth);
    run.converged = true;
    for (const auto& r : learned.reports) {
        run.iterations = std::max(run.iterations, r.iterations);
        run.converged = run.converged && r.converged;
    }
    return run;
}

} // namespace

std::vector<MethodRun> run_realization(const datagen::SimulatedData& data, const std::vector<eval::Method>& methods,
                                       const TuningProtocol& protocol, const SolverOptions& options)
{
    const auto datasets = datasets_from(data.signals);
    const auto& truth = data.truth;

    Hyperparameters base = protocol.fixed;
    if (!protocol.alpha_grid.empty()) {
        base.alpha = eval::grid_search_alpha(datasets, truth, eval::Method::Single, base, protocol.alpha_grid, options)
                         .value;
    }

    std::vector<MethodRun> runs;
    for (const auto method : methods) {
        try {
            Hyperparameters h = base;
            bool attained = true;
            const bool joint = method != eval::Method::Single;
            auto tune_coupling = [&]() {
                if (!joint || !protocol.beta_target || datasets.size() < 2) return;
                eval::BetaSearch search;
                search.target = *protocol.beta_target;
                search.tolerance = protocol.beta_tolerance;
                const auto tuned = eval::tune_beta(datasets, method, h, options, search);
                h.beta = tuned.value;
                attained = tuned.attained;
            };
            tune_coupling();
            if (method == eval::Method::MvglL2 && protocol.gamma_search && h.beta > 0.0) {
                auto search = *protocol.gamma_search;
                if (!protocol.beta_target || datasets.size() < 2) {
                    search.retune.reset();
                } else if (search.retune) {
                    search.retune->target = *protocol.beta_target;
                    search.retune->tolerance = protocol.beta_tolerance;
                }
                const auto tuned = eval::grid_search_gamma(datasets, truth, h, search, options);
                h.gamma = tuned.value;
                if (tuned.beta) h.beta = *tuned.beta;
            }
            auto run = finish(method, h, datasets, truth, options);
            run.beta_attained = attained;
            runs.push_back(std::move(run));
        } catch (const Error& e) {
            MethodRun failed;
            failed.method = method;
            failed.error = e.what();
            runs.push_back(std::move(failed));
        }
    }
    return runs;
}

} // namespace mvgl::pipeline
