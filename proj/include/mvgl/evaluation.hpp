#pragma once

#include "mvgl/datagen.hpp"
#include "mvgl/edge_set.hpp"
#include "mvgl/solver.hpp"
#include "mvgl/svgl.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvgl::eval {

struct BinarizeRule {
    enum class Kind { Relative, TopK };
    Kind kind = Kind::Relative;
    double relative = 1e-4; // keep edges with weight > relative * max weight
    std::size_t top_k = 0;

    static BinarizeRule relative_threshold(double r = 1e-4) { return {Kind::Relative, r, 0}; }
    static BinarizeRule top(std::size_t k) { return {Kind::TopK, 1e-4, k}; }
    /// Top-K with K = floor(density * m).
    static BinarizeRule density(double d, int n);
};

/// Weights are -l. Top-K ignores pairs of zero weight and throws EmptyGraph
/// when no positive weight exists.
EdgeSet binarize(const EdgeVector& edges, const BinarizeRule& rule = {});

double f1(const EdgeSet& predicted, const EdgeSet& truth);

/// Mean Pearson correlation over view pairs of the adjacency weights.
/// Pairs involving a constant vector contribute 0 and are counted in
/// degenerate_pairs.
double pairwise_correlation(const std::vector<EdgeVector>& views, int* degenerate_pairs = nullptr);

struct Metrics {
    double f1_view = 0.0;
    std::optional<double> f1_consensus;
    std::vector<double> per_view_f1;
    double mean_pairwise_corr = 0.0;

    std::string to_json(int indent = 2) const;
};

Metrics evaluate(const std::vector<EdgeSet>& views, const std::optional<EdgeSet>& consensus,
                 const datagen::GroundTruth& truth, double mean_pairwise_corr);

enum class Method {
    Single,
    MvglL1,
    MvglL2,
    MvglL2Unregularized, // mvGL-l2 with r_v removed
};

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);
PenaltyModel penalty_for(Method m);

struct LearnResult {
    std::vector<EdgeVector> views;
    std::optional<EdgeVector> consensus;
    std::vector<ConvergenceReport> reports; // one per view for Single, else one
};

/// Single learns every view independently with alpha (and rho); the mvGL
/// methods run the joint solver.
LearnResult learn(const std::vector<ViewDataset>& datasets, Method method, const Hyperparameters& hyper,
                  const SolverOptions& options = {});

/// Binarizes and scores a learning result.
Metrics score(const LearnResult& learned, const datagen::GroundTruth& truth, const BinarizeRule& rule = {});

std::vector<double> log_grid(double low, double high, int points);

struct TunePoint {
    double value = 0.0;
    double statistic = 0.0;
};

struct TuneResult {
    double value = 0.0;
    double achieved = 0.0;
    bool attained = false;
    std::vector<TunePoint> trace;
    int monotonicity_violations = 0;
    std::optional<double> beta; // coupling used with the chosen value, when retuned
};

struct BetaSearch {
    double target = 0.8;
    double tolerance = 0.02;
    double log10_low = -4.0;
    double log10_high = 4.0;
    int max_evaluations = 20;
    // When set, this point is tried first and the bracket is grown from it
    // one decade at a time instead of starting from [log10_low, log10_high].
    std::optional<double> initial_log10;
};

/// Bisection on log10(beta) until the learned views' mean pairwise
/// correlation is within tolerance of the target. The correlation is assumed
/// to increase with beta; evaluations breaking that are counted.
TuneResult tune_beta(const std::vector<ViewDataset>& datasets, Method method, const Hyperparameters& base,
                     const SolverOptions& options = {}, const BetaSearch& search = {});

/// Simulation mode: the alpha maximizing F1_view against the ground truth.
TuneResult grid_search_alpha(const std::vector<ViewDataset>& datasets, const datagen::GroundTruth& truth,
                             Method method, const Hyperparameters& base, const std::vector<double>& grid,
                             const SolverOptions& options = {});

/// Application mode: the smallest alpha whose learned views carry at least
/// floor(target_density * m) edges; achieved is the mean top-K density.
TuneResult grid_search_alpha_density(const std::vector<ViewDataset>& datasets, Method method,
                                     const Hyperparameters& base, const std::vector<double>& grid,
                                     double target_density, const SolverOptions& options = {});

/// Consensus sparsity search for mvGL-l2. Candidates are
/// gamma = multiplier * beta * sqrt(N): at gamma >= beta * sqrt(N) the
/// l1 term dominates the group penalty's pull and the consensus is empty.
struct GammaSearch {
    std::vector<double> multipliers = {0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};
    // Re-target the view correlation for each candidate (beta moves).
    std::optional<BetaSearch> retune = BetaSearch{};
    // Largest gamma whose F1_view is within this slack of the best wins.
    double f1_slack = 0.01;
};

/// Simulation mode: picks gamma by F1_view against the ground truth, starting
/// from the coupling in base.beta.
TuneResult grid_search_gamma(const std::vector<ViewDataset>& datasets, const datagen::GroundTruth& truth,
                             const Hyperparameters& base, const GammaSearch& search = {},
                             const SolverOptions& options = {});

} // namespace mvgl::eval
