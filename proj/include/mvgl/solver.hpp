#pragma once

#include "mvgl/graph_core.hpp"
#include "mvgl/prox.hpp"

#include <vector>

namespace mvgl {

/// Observations for one view: X is n x p (columns are graph signals) with the
/// sufficient statistics k = upper(X X^T) and d = diag(X X^T).
struct ViewDataset {
    Matrix signals;
    EdgeVector k;
    Vector d;

    int nodes() const noexcept { return k.nodes(); }
    Eigen::Index samples() const noexcept { return signals.cols(); }
};

ViewDataset precompute_statistics(const Matrix& X);

/// Copy of the dataset with k and d divided by the sample count.
ViewDataset normalized_by_samples(const ViewDataset& data);

struct Hyperparameters {
    double alpha = 1.0; // Frobenius (density) weight, > 0
    double beta = 0.0;  // consensus coupling, >= 0
    double gamma = 0.0; // consensus sparsity, >= 0, GroupL21 only
    double rho = 1.0;   // ADMM penalty, > 0

    void validate() const;
};

struct SolverOptions {
    int max_admm_iter = 2000;
    int max_bcd_iter = 50;
    double eps_abs = 1e-5;
    double eps_rel = 1e-4;
    double bcd_tol = 1e-8;
    // Residual balancing: rho is doubled/halved when one residual exceeds
    // the other by 10x. Off by default.
    bool adaptive_rho = false;
    bool normalize_by_samples = false;
    bool record_history = true;

    void validate() const;
};

/// All ADMM variables. Per-view quantities are stored column-wise (m x N).
struct SolverState {
    int n = 0;
    Matrix view_edges; // l^i
    Matrix view_slack; // z^i
    Matrix view_diff;  // v^i
    Matrix view_dual;  // y^i
    Matrix diff_dual;  // w^i
    Vector consensus;       // l
    Vector consensus_slack; // z
    Vector consensus_dual;  // y
    double rho = 1.0;
    int iteration = 0;

    int views() const noexcept { return static_cast<int>(view_edges.cols()); }
    Eigen::Index edges() const noexcept { return view_edges.rows(); }
};

/// Uniform feasible start: l^i = z^i = l = z = -n/m, v^i and duals zero.
SolverState initial_state(int n, int views, double rho);

/// Closed-form minimizer of the l^i-subproblem (equality-constrained QP).
Vector view_qp_step(const ViewDataset& data, double alpha, double rho,
                    const Eigen::Ref<const Vector>& dual, const Eigen::Ref<const Vector>& slack);

Vector step_ell(int view, const SolverState& state, const ViewDataset& data, const Hyperparameters& hyper);

/// prox of c_v at A = z^i - z - w^i / rho, threshold beta / rho.
Matrix step_v(const SolverState& state, const Hyperparameters& hyper, const PenaltyModel& model);

/// prox of r_v at z + y / rho, threshold gamma / rho.
Vector step_consensus_ell(const SolverState& state, const Hyperparameters& hyper, const PenaltyModel& model);

struct SlackUpdate {
    Matrix view_slack;
    Vector consensus_slack;
    int sweeps = 0;
    bool converged = false;
};

/// Block coordinate descent on the (z^i, z) subproblem, warm-started from
/// the slacks held in state. Sweeps update every z^i, then z.
/// If trace is given, the subproblem objective after each sweep is appended.
SlackUpdate step_z_bcd(const SolverState& state, const SolverOptions& options,
                       std::vector<double>* trace = nullptr);

/// Objective of the (z^i, z) subproblem up to an additive constant.
double slack_objective(const SolverState& state, const Matrix& view_slack, const Vector& consensus_slack);

SolverState dual_updates(SolverState state);

/// Vectorized joint objective evaluated at views (m x N) and consensus.
double objective(const Matrix& views, const Eigen::Ref<const Vector>& consensus,
                 const std::vector<ViewDataset>& datasets, const Hyperparameters& hyper,
                 const PenaltyModel& model);

/// Smoothness plus Frobenius term of a single view.
double view_objective(const Eigen::Ref<const Vector>& edges, const ViewDataset& data, double alpha);

struct ConvergenceReport {
    int iterations = 0;
    bool converged = false;
    double final_rho = 1.0;
    std::vector<double> primal_residual;
    std::vector<double> dual_residual;
    std::vector<double> objective;
};

struct MultiviewSolution {
    std::vector<EdgeVector> view_edges;
    EdgeVector consensus_edges;
    ConvergenceReport report;
};

MultiviewSolution admm_solve(const std::vector<ViewDataset>& datasets, const Hyperparameters& hyper,
                             const PenaltyModel& model, const SolverOptions& options = {});

} // namespace mvgl
