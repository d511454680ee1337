#include "mvgl/solver.hpp"

#include "mvgl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mvgl {

ViewDataset precompute_statistics(const Matrix& X)
{
    if (!X.allFinite()) throw InvalidData("signal matrix contains NaN or Inf");
    if (X.rows() < 2) throw InvalidData("signal matrix needs at least 2 nodes");
    if (X.cols() < 1) throw InvalidData("signal matrix needs at least one observation");

    const Matrix K = X * X.transpose();
    const auto n = static_cast<int>(X.rows());
    EdgeVector k(n);
    Eigen::Index e = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++e) k[e] = 0.5 * (K(i, j) + K(j, i));
    }
    return {X, std::move(k), K.diagonal()};
}

ViewDataset normalized_by_samples(const ViewDataset& data)
{
    const auto p = static_cast<double>(data.samples());
    ViewDataset out = data;
    out.k.values() /= p;
    out.d /= p;
    return out;
}

void Hyperparameters::validate() const
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidHyperparameter("alpha must be > 0");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidHyperparameter("beta must be >= 0");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidHyperparameter("gamma must be >= 0");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidHyperparameter("rho must be > 0");
}

void SolverOptions::validate() const
{
    if (max_admm_iter < 1) throw InvalidConfig("max_admm_iter must be >= 1");
    if (max_bcd_iter < 1) throw InvalidConfig("max_bcd_iter must be >= 1");
    if (!(eps_abs > 0.0)) throw InvalidConfig("eps_abs must be > 0");
    if (!(eps_rel > 0.0)) throw InvalidConfig("eps_rel must be > 0");
    if (!(bcd_tol > 0.0)) throw InvalidConfig("bcd_tol must be > 0");
}

SolverState initial_state(int n, int views, double rho)
{
    const auto m = edge_count(n);
    const double uniform = -static_cast<double>(n) / static_cast<double>(m);

    SolverState s;
    s.n = n;
    s.view_edges = Matrix::Constant(m, views, uniform);
    s.view_slack = s.view_edges;
    s.view_diff = Matrix::Zero(m, views);
    s.view_dual = Matrix::Zero(m, views);
    s.diff_dual = Matrix::Zero(m, views);
    s.consensus = Vector::Constant(m, uniform);
    s.consensus_slack = s.consensus;
    s.consensus_dual = Vector::Zero(m);
    s.rho = rho;
    return s;
}

Vector view_qp_step(const ViewDataset& data, double alpha, double rho, const Eigen::Ref<const Vector>& dual,
                    const Eigen::Ref<const Vector>& slack)
{
    const int n = data.nodes();
    Vector rhs = graph::apply_S_transpose(data.d) - 2.0 * data.k.values() + dual + rho * slack;
    // 1 is an eigenvector of M, so projecting after the inverse solves the KKT
    // system exactly.
    return graph::project_hyperplane(n, graph::solve_M(n, rhs, alpha, rho));
}

Vector step_ell(int view, const SolverState& state, const ViewDataset& data, const Hyperparameters& hyper)
{
    return view_qp_step(data, hyper.alpha, state.rho, state.view_dual.col(view), state.view_slack.col(view));
}

Matrix step_v(const SolverState& state, const Hyperparameters& hyper, const PenaltyModel& model)
{
    Matrix A = state.view_slack - state.diff_dual / state.rho;
    A.colwise() -= state.consensus_slack;
    return prox::prox_cv(A, hyper.beta / state.rho, model);
}

Vector step_consensus_ell(const SolverState& state, const Hyperparameters& hyper, const PenaltyModel& model)
{
    const Vector point = state.consensus_slack + state.consensus_dual / state.rho;
    return prox::prox_rv(point, hyper.gamma / state.rho, model);
}

namespace {

// Targets of the z-subproblem in scaled form:
//   view_target_i = l^i - y^i / rho
//   diff_offset_i = v^i + w^i / rho      (residual v^i - z^i + z + w^i / rho)
//   consensus_target = l - y / rho
struct SlackTargets {
    Matrix view_target;
    Matrix diff_offset;
    Vector consensus_target;
};

SlackTargets slack_targets(const SolverState& s)
{
    return {s.view_edges - s.view_dual / s.rho, s.view_diff + s.diff_dual / s.rho,
            s.consensus - s.consensus_dual / s.rho};
}

double slack_objective(const SlackTargets& t, const Matrix& zs, const Vector& z)
{
    Matrix diff = t.diff_offset - zs;
    diff.colwise() += z;
    return (zs - t.view_target).squaredNorm() + diff.squaredNorm() + (z - t.consensus_target).squaredNorm();
}

} // namespace

double slack_objective(const SolverState& state, const Matrix& view_slack, const Vector& consensus_slack)
{
    return 0.5 * state.rho * slack_objective(slack_targets(state), view_slack, consensus_slack);
}

SlackUpdate step_z_bcd(const SolverState& state, const SolverOptions& options, std::vector<double>* trace)
{
    const SlackTargets t = slack_targets(state);
    const int views = state.views();
    const double inv_count = 1.0 / (views + 1);

    SlackUpdate out{state.view_slack, state.consensus_slack, 0, false};
    Matrix& zs = out.view_slack;
    Vector& z = out.consensus_slack;

    // Sum_i (diff_offset_i) is fixed across sweeps.
    const Vector offset_sum = t.diff_offset.rowwise().sum();

    for (int sweep = 0; sweep < options.max_bcd_iter; ++sweep) {
        double change = 0.0;
        for (int i = 0; i < views; ++i) {
            auto zi = zs.col(i);
            const Vector updated =
                (0.5 * (t.view_target.col(i) + t.diff_offset.col(i) + z)).cwiseMin(0.0);
            change = std::max(change, (updated - zi).lpNorm<Eigen::Infinity>());
            zi = updated;
        }
        const Vector updated_z =
            (inv_count * (zs.rowwise().sum() - offset_sum + t.consensus_target)).cwiseMin(0.0);
        change = std::max(change, (updated_z - z).lpNorm<Eigen::Infinity>());
        z = updated_z;

        out.sweeps = sweep + 1;
        if (trace) trace->push_back(0.5 * state.rho * slack_objective(t, zs, z));
        if (change < options.bcd_tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

SolverState dual_updates(SolverState s)
{
    s.view_dual += s.rho * (s.view_slack - s.view_edges);
    Matrix diff_residual = s.view_diff - s.view_slack;
    diff_residual.colwise() += s.consensus_slack;
    s.diff_dual += s.rho * diff_residual;
    s.consensus_dual += s.rho * (s.consensus_slack - s.consensus);
    return s;
}

double view_objective(const Eigen::Ref<const Vector>& edges, const ViewDataset& data, double alpha)
{
    const int n = data.nodes();
    const Vector linear = 2.0 * data.k.values() - graph::apply_S_transpose(data.d);
    const Vector S_edges = graph::apply_S(n, edges);
    // l^T (S^T S + 2 I) l = ||S l||^2 + 2 ||l||^2
    return linear.dot(edges) + alpha * (S_edges.squaredNorm() + 2.0 * edges.squaredNorm());
}

double objective(const Matrix& views, const Eigen::Ref<const Vector>& consensus,
                 const std::vector<ViewDataset>& datasets, const Hyperparameters& hyper, const PenaltyModel& model)
{
    if (static_cast<std::size_t>(views.cols()) != datasets.size()) {
        throw DimensionMismatch("objective: view count does not match dataset count");
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < views.cols(); ++i) {
        total += view_objective(views.col(i), datasets[static_cast<std::size_t>(i)], hyper.alpha);
    }
    Matrix delta = views;
    delta.colwise() -= consensus;
    const auto pen = prox::penalty_value(delta, consensus, model);
    return total + hyper.beta * pen.consensus + hyper.gamma * pen.regularizer;
}

namespace {

struct Residuals {
    double primal = 0.0;
    double dual = 0.0;
    double eps_primal = 0.0;
    double eps_dual = 0.0;

    bool converged() const { return primal <= eps_primal && dual <= eps_dual; }
    double ratio() const { return std::max(primal / eps_primal, dual / eps_dual); }
};

Residuals residuals(const SolverState& s, const Matrix& prev_view_slack, const Vector& prev_consensus_slack,
                    const SolverOptions& options)
{
    const auto m = static_cast<double>(s.edges());
    const double floor = options.eps_abs * std::sqrt(m * (2.0 * s.views() + 1.0));

    Matrix diff_residual = s.view_diff - s.view_slack;
    diff_residual.colwise() += s.consensus_slack;
    const double primal = std::sqrt((s.view_slack - s.view_edges).squaredNorm() + diff_residual.squaredNorm()
                                    + (s.consensus_slack - s.consensus).squaredNorm());

    const Matrix dzs = s.view_slack - prev_view_slack;
    const Vector dz = s.consensus_slack - prev_consensus_slack;
    Matrix ddiff = dzs;
    ddiff.colwise() -= dz;
    const double dual = s.rho * std::sqrt(dzs.squaredNorm() + ddiff.squaredNorm() + dz.squaredNorm());

    Matrix slack_diff = s.view_slack;
    slack_diff.colwise() -= s.consensus_slack;
    const double x_norm =
        std::sqrt(s.view_edges.squaredNorm() + s.view_diff.squaredNorm() + s.consensus.squaredNorm());
    const double z_norm =
        std::sqrt(s.view_slack.squaredNorm() + slack_diff.squaredNorm() + s.consensus_slack.squaredNorm());
    const double y_norm =
        std::sqrt(s.view_dual.squaredNorm() + s.diff_dual.squaredNorm() + s.consensus_dual.squaredNorm());

    return {primal, dual, floor + options.eps_rel * std::max(x_norm, z_norm), floor + options.eps_rel * y_norm};
}

} // namespace

MultiviewSolution admm_solve(const std::vector<ViewDataset>& input, const Hyperparameters& hyper,
                             const PenaltyModel& model, const SolverOptions& options)
{
    hyper.validate();
    options.validate();
    if (input.empty()) throw InvalidData("admm_solve needs at least one view");
    const int n = input.front().nodes();
    for (const auto& d : input) {
        if (d.nodes() != n) {
            throw DimensionMismatch("views disagree on node count: " + std::to_string(n) + " vs "
                                    + std::to_string(d.nodes()));
        }
    }
    if (n < 3) throw InvalidData("admm_solve needs at least 3 nodes");

    std::vector<ViewDataset> scaled;
    const std::vector<ViewDataset>* datasets = &input;
    if (options.normalize_by_samples) {
        scaled.reserve(input.size());
        for (const auto& d : input) scaled.push_back(normalized_by_samples(d));
        datasets = &scaled;
    }

    const int views = static_cast<int>(input.size());
    SolverState state = initial_state(n, views, hyper.rho);

    MultiviewSolution solution;
    auto& report = solution.report;

    Matrix best_views = state.view_slack;
    Vector best_consensus = state.consensus_slack;
    double best_ratio = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < options.max_admm_iter; ++iter) {
        for (int i = 0; i < views; ++i) {
            state.view_edges.col(i) = step_ell(i, state, (*datasets)[static_cast<std::size_t>(i)], hyper);
        }
        state.view_diff = step_v(state, hyper, model);
        state.consensus = step_consensus_ell(state, hyper, model);

        const Matrix prev_view_slack = state.view_slack;
        const Vector prev_consensus_slack = state.consensus_slack;
        SlackUpdate slack = step_z_bcd(state, options);
        state.view_slack = std::move(slack.view_slack);
        state.consensus_slack = std::move(slack.consensus_slack);

        state = dual_updates(std::move(state));
        state.iteration = iter + 1;

        const Residuals res = residuals(state, prev_view_slack, prev_consensus_slack, options);
        if (options.record_history) {
            report.primal_residual.push_back(res.primal);
            report.dual_residual.push_back(res.dual);
            report.objective.push_back(objective(state.view_edges, state.consensus, *datasets, hyper, model));
        }
        report.iterations = state.iteration;

        if (res.ratio() < best_ratio) {
            best_ratio = res.ratio();
            best_views = state.view_slack;
            best_consensus = state.consensus_slack;
        }
        if (res.converged()) {
            report.converged = true;
            break;
        }

        if (options.adaptive_rho) {
            if (res.primal > 10.0 * res.dual) {
                state.rho *= 2.0;
            } else if (res.dual > 10.0 * res.primal) {
                state.rho /= 2.0;
            }
        }
    }
    report.final_rho = state.rho;

    // Slacks satisfy the sign constraints exactly; the views additionally get
    // their trace constraint restored by an exact projection.
    solution.view_edges.reserve(static_cast<std::size_t>(views));
    for (int i = 0; i < views; ++i) {
        solution.view_edges.emplace_back(n, graph::project_feasible(n, best_views.col(i)));
    }
    solution.consensus_edges = EdgeVector(n, best_consensus);
    return solution;
}

} // namespace mvgl
