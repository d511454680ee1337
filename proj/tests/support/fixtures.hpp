#pragma once

// Randomized solver states and the slack-subproblem oracle, shared by the
// unit tests and the acceptance runner.

#include "mvgl/solver.hpp"

#include "oracles.hpp"

namespace fixture {

using mvgl::Matrix;
using mvgl::SolverState;
using mvgl::Vector;
using mvgl::ViewDataset;

inline double max_abs(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }
inline double max_abs(const Matrix& v) { return v.lpNorm<Eigen::Infinity>(); }

inline ViewDataset random_dataset(oracle::Random& rng, int n, int p)
{
    return mvgl::precompute_statistics(rng.matrix(n, p));
}

inline SolverState random_state(oracle::Random& rng, int n, int views, double rho)
{
    SolverState s = mvgl::initial_state(n, views, rho);
    const auto m = s.edges();
    s.view_edges = rng.matrix(m, views);
    s.view_slack = rng.matrix(m, views).cwiseMin(0.0);
    s.view_diff = rng.matrix(m, views);
    s.view_dual = rng.matrix(m, views);
    s.diff_dual = rng.matrix(m, views);
    s.consensus = rng.vector(m);
    s.consensus_slack = rng.vector(m).cwiseMin(0.0);
    s.consensus_dual = rng.vector(m);
    return s;
}

// The (z^i, z) subproblem written out from the augmented Lagrangian terms
// that involve the slacks.
struct SlackProblem {
    const SolverState& s;

    double value(const Matrix& zs, const Vector& z) const
    {
        const double rho = s.rho;
        double f = 0.0;
        for (int i = 0; i < s.views(); ++i) {
            const Vector r1 = zs.col(i) - s.view_edges.col(i);
            const Vector r2 = s.view_diff.col(i) - zs.col(i) + z;
            f += s.view_dual.col(i).dot(r1) + 0.5 * rho * r1.squaredNorm();
            f += s.diff_dual.col(i).dot(r2) + 0.5 * rho * r2.squaredNorm();
        }
        const Vector r3 = z - s.consensus;
        return f + s.consensus_dual.dot(r3) + 0.5 * rho * r3.squaredNorm();
    }

    void gradient(const Matrix& zs, const Vector& z, Matrix& gzs, Vector& gz) const
    {
        const double rho = s.rho;
        gz = s.consensus_dual + rho * (z - s.consensus);
        gzs.resize(zs.rows(), zs.cols());
        for (int i = 0; i < s.views(); ++i) {
            const Vector r2 = s.view_diff.col(i) - zs.col(i) + z;
            gzs.col(i) = s.view_dual.col(i) + rho * (zs.col(i) - s.view_edges.col(i)) - s.diff_dual.col(i) - rho * r2;
            gz += s.diff_dual.col(i) + rho * r2;
        }
    }

    // Projected gradient with step 1 / L, L = rho (2N + 1) by Gershgorin.
    std::pair<Matrix, Vector> solve() const
    {
        Matrix zs = Matrix::Zero(s.edges(), s.views());
        Vector z = Vector::Zero(s.edges());
        const double step = 1.0 / (s.rho * (2.0 * s.views() + 1.0));
        Matrix gzs;
        Vector gz;
        for (int it = 0; it < 2000000; ++it) {
            gradient(zs, z, gzs, gz);
            const Matrix nzs = (zs - step * gzs).cwiseMin(0.0);
            const Vector nz = (z - step * gz).cwiseMin(0.0);
            const double change = std::max(max_abs(Matrix(nzs - zs)), max_abs(Vector(nz - z)));
            zs = nzs;
            z = nz;
            if (change < 1e-15) break;
        }
        return {zs, z};
    }
};

} // namespace fixture
