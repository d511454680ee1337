#pragma once

#include "mvgl/solver.hpp"

namespace mvgl {

struct SingleViewSolution {
    EdgeVector edges;
    ConvergenceReport report;
};

/// Learns one graph from smooth signals:
///   min (2k - S^T d)^T l + alpha l^T (S^T S + 2I) l   s.t. l <= 0, 1^T l = -n
/// with a two-block ADMM (closed-form QP step, orthant projection).
SingleViewSolution solve_single(const ViewDataset& data, double alpha, const SolverOptions& options = {},
                                double rho = 1.0);

} // namespace mvgl
