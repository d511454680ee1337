#pragma once

#include "mvgl/datagen.hpp"
#include "mvgl/evaluation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mvgl::pipeline {

/// How hyperparameters are chosen for one simulated realization.
///  - alpha: grid search maximizing svGL F1_view; the winner is shared by all
///    methods (or `fixed.alpha` when the grid is empty).
///  - beta: bisection to the target pairwise correlation (or `fixed.beta`).
///  - gamma (mvGL-l2): relative grid search by F1_view, re-targeting beta
///    for each candidate (or `fixed.gamma` when disabled).
struct TuningProtocol {
    std::vector<double> alpha_grid = eval::log_grid(0.1, 100.0, 13);
    std::optional<double> beta_target = 0.8;
    double beta_tolerance = 0.02;
    std::optional<eval::GammaSearch> gamma_search = eval::GammaSearch{};
    Hyperparameters fixed{};
};

struct MethodRun {
    eval::Method method = eval::Method::Single;
    Hyperparameters hyper;
    eval::Metrics metrics;
    double wall_seconds = 0.0; // final learn only
    int iterations = 0;
    bool converged = false;
    bool beta_attained = true;
    std::string error; // empty on success
};

/// Tunes and learns every requested method on one simulated dataset.
std::vector<MethodRun> run_realization(const datagen::SimulatedData& data, const std::vector<eval::Method>& methods,
                                       const TuningProtocol& protocol, const SolverOptions& options);

std::vector<ViewDataset> datasets_from(const std::vector<Matrix>& signals);

} // namespace mvgl::pipeline
