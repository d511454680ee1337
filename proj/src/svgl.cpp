#include "mvgl/svgl.hpp"

#include "mvgl/errors.hpp"

#include <cmath>
#include <limits>

namespace mvgl {

SingleViewSolution solve_single(const ViewDataset& input, double alpha, const SolverOptions& options, double rho)
{
    Hyperparameters{alpha, 0.0, 0.0, rho}.validate();
    options.validate();
    const int n = input.nodes();
    if (n < 3) throw InvalidData("solve_single needs at least 3 nodes");

    const ViewDataset data = options.normalize_by_samples ? normalized_by_samples(input) : input;
    const auto m = edge_count(n);
    const double floor = options.eps_abs * std::sqrt(static_cast<double>(m));

    Vector edges = Vector::Constant(m, -static_cast<double>(n) / static_cast<double>(m));
    Vector slack = edges;
    Vector dual = Vector::Zero(m);

    SingleViewSolution out;
    auto& report = out.report;
    Vector best = slack;
    double best_ratio = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < options.max_admm_iter; ++iter) {
        edges = view_qp_step(data, alpha, rho, dual, slack);
        const Vector prev = slack;
        slack = (edges - dual / rho).cwiseMin(0.0);
        dual += rho * (slack - edges);

        const double primal = (slack - edges).norm();
        const double dual_res = rho * (slack - prev).norm();
        const double eps_primal = floor + options.eps_rel * std::max(edges.norm(), slack.norm());
        const double eps_dual = floor + options.eps_rel * dual.norm();

        if (options.record_history) {
            report.primal_residual.push_back(primal);
            report.dual_residual.push_back(dual_res);
            report.objective.push_back(view_objective(edges, data, alpha));
        }
        report.iterations = iter + 1;

        const double ratio = std::max(primal / eps_primal, dual_res / eps_dual);
        if (ratio < best_ratio) {
            best_ratio = ratio;
            best = slack;
        }
        if (primal <= eps_primal && dual_res <= eps_dual) {
            report.converged = true;
            break;
        }
        if (options.adaptive_rho) {
            if (primal > 10.0 * dual_res) {
                rho *= 2.0;
            } else if (dual_res > 10.0 * primal) {
                rho /= 2.0;
            }
        }
    }
    report.final_rho = rho;
    out.edges = EdgeVector(n, graph::project_feasible(n, best));
    return out;
}

} // namespace mvgl
