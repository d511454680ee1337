#include "mvgl/errors.hpp"
#include "mvgl/solver.hpp"
#include "mvgl/svgl.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numeric>

using namespace mvgl;
using fixture::random_dataset;
using fixture::random_state;
using fixture::max_abs;
using fixture::SlackProblem;

namespace {

SolverOptions tight_bcd()
{
    SolverOptions o;
    o.bcd_tol = 1e-14;
    o.max_bcd_iter = 100000;
    return o;
}

SolverOptions tight_admm()
{
    SolverOptions o;
    o.eps_abs = 1e-10;
    o.eps_rel = 1e-9;
    o.max_admm_iter = 50000;
    o.adaptive_rho = true;
    return o;
}

} // namespace

TEST_CASE("precompute_statistics examples")
{
    Matrix e0 = Matrix::Zero(3, 1);
    e0(0, 0) = 1.0;
    const auto a = precompute_statistics(e0);
    CHECK(a.k.values().isZero(0.0));
    CHECK(a.d == (Vector(3) << 1, 0, 0).finished());
    CHECK(a.nodes() == 3);
    CHECK(a.samples() == 1);

    const auto b = precompute_statistics(Matrix::Ones(4, 1));
    CHECK(b.k.values() == Vector::Ones(6));
    CHECK(b.d == Vector::Ones(4));

    oracle::Random rng(1);
    const Matrix X = rng.matrix(4, 3);
    const Matrix K = X * X.transpose();
    const auto c = precompute_statistics(X);
    CHECK(max_abs(Vector(c.k.values() - oracle::dense_upper(K))) <= 1e-12);
    CHECK(max_abs(Vector(c.d - K.diagonal())) <= 1e-12);
}

TEST_CASE("precompute_statistics rejects non-finite or empty input")
{
    Matrix X = Matrix::Ones(3, 2);
    X(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(precompute_statistics(X), InvalidData);
    X(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(precompute_statistics(X), InvalidData);
    CHECK_THROWS_AS(precompute_statistics(Matrix::Ones(3, 0)), InvalidData);
    CHECK_THROWS_AS(precompute_statistics(Matrix::Ones(1, 4)), InvalidData);
}

TEST_CASE("normalized_by_samples divides the statistics by p")
{
    oracle::Random rng(2);
    const auto d = random_dataset(rng, 5, 8);
    const auto s = normalized_by_samples(d);
    CHECK(max_abs(Vector(s.k.values() * 8.0 - d.k.values())) <= 1e-12);
    CHECK(max_abs(Vector(s.d * 8.0 - d.d)) <= 1e-12);
}

TEST_CASE("hyperparameter and option validation")
{
    CHECK_NOTHROW(Hyperparameters{}.validate());
    CHECK_THROWS_AS((Hyperparameters{0.0, 0, 0, 1}).validate(), InvalidHyperparameter);
    CHECK_THROWS_AS((Hyperparameters{1, -1, 0, 1}).validate(), InvalidHyperparameter);
    CHECK_THROWS_AS((Hyperparameters{1, 0, -1, 1}).validate(), InvalidHyperparameter);
    CHECK_THROWS_AS((Hyperparameters{1, 0, 0, 0}).validate(), InvalidHyperparameter);
    SolverOptions o;
    CHECK_NOTHROW(o.validate());
    o.max_bcd_iter = 0;
    CHECK_THROWS_AS(o.validate(), InvalidConfig);
    o = {};
    o.eps_abs = 0.0;
    CHECK_THROWS_AS(o.validate(), InvalidConfig);
}

TEST_CASE("initial state is uniform and feasible")
{
    const auto s = initial_state(6, 3, 1.0);
    CHECK(s.edges() == 15);
    CHECK(s.views() == 3);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(s.view_edges.col(i).sum() + 6.0) <= 1e-12);
    CHECK(s.view_diff.isZero(0.0));
    CHECK(s.view_dual.isZero(0.0));
    CHECK(s.consensus_dual.isZero(0.0));
    CHECK(s.consensus == s.consensus_slack);
}

TEST_CASE("step_ell: zero data and uniform slack give a uniform output")
{
    const int n = 5;
    const auto data = precompute_statistics(Matrix::Zero(n, 3));
    const auto state = initial_state(n, 1, 1.0);
    const Vector l = step_ell(0, state, data, Hyperparameters{});
    CHECK(max_abs(Vector(l.array() - l[0])) <= 1e-12);
    CHECK(std::abs(l.sum() + n) <= 1e-10);
}

TEST_CASE("step_ell matches the dense KKT oracle on 100 random states")
{
    oracle::Random rng(3);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = rng.integer(3, 8);
        const double rho = rng.uniform(0.1, 10.0);
        const Hyperparameters h{rng.uniform(0.05, 5.0), 0.0, 0.0, rho};
        const auto data = random_dataset(rng, n, rng.integer(1, 20));
        const auto state = random_state(rng, n, 2, rho);
        const int view = rng.integer(0, 1);

        const Vector l = step_ell(view, state, data, h);
        // min lin^T l + alpha l^T Q l - y^T l + rho/2 ||z - l||^2  s.t. 1^T l = -n
        const Matrix S = oracle::dense_S(n);
        const auto m = l.size();
        const Vector lin = 2.0 * data.k.values() - S.transpose() * data.d;
        const Matrix H = 2.0 * h.alpha * (S.transpose() * S + 2.0 * Matrix::Identity(m, m)) + rho * Matrix::Identity(m, m);
        const Vector g = -lin + state.view_dual.col(view) + rho * state.view_slack.col(view);
        const Vector expected = oracle::equality_qp(H, g, -n);
        CHECK(max_abs(Vector(l - expected)) <= 1e-7 * std::max(1.0, max_abs(expected)));
        CHECK(std::abs(l.sum() + n) <= 1e-8);
        // stationarity residual is parallel to 1
        const Vector r = H * l - g;
        CHECK(max_abs(Vector(r.array() - r.mean())) <= 1e-7 * std::max(1.0, max_abs(g)));
    }
}

TEST_CASE("step_ell approaches the projection of the slack for huge rho")
{
    oracle::Random rng(4);
    const int n = 6;
    const auto data = random_dataset(rng, n, 10);
    auto state = initial_state(n, 1, 1e8);
    state.view_slack.col(0) = graph::project_feasible(n, rng.vector(state.edges()));
    const Vector l = step_ell(0, state, data, Hyperparameters{1.0, 0, 0, 1e8});
    const Vector target = graph::project_hyperplane(n, state.view_slack.col(0));
    CHECK(max_abs(Vector(l - target)) <= 1e-5);
}

TEST_CASE("step_v examples")
{
    oracle::Random rng(5);
    auto s = random_state(rng, 5, 3, 2.0);
    Matrix A = s.view_slack - s.diff_dual / s.rho;
    A.colwise() -= s.consensus_slack;
    for (const auto& model : {PenaltyModel::fused(), PenaltyModel::group()}) {
        CHECK(max_abs(Matrix(step_v(s, Hyperparameters{1, 0, 0, 2}, model) - A)) <= 1e-15);
    }

    auto zero = s;
    zero.view_slack.setZero();
    zero.diff_dual.setZero();
    zero.consensus_slack.setZero();
    CHECK(step_v(zero, Hyperparameters{1, 3, 0, 2}, PenaltyModel::fused()).isZero(0.0));

    const double beta = 1.3;
    const Matrix V = step_v(s, Hyperparameters{1, beta, 0, 2}, PenaltyModel::fused());
    const double tau = beta / s.rho;
    const double fv = V.cwiseAbs().sum() + (V - A).squaredNorm() / (2 * tau);
    for (int k = 0; k < 1000; ++k) {
        const Matrix Y = V + rng.matrix(V.rows(), V.cols()) * std::pow(10.0, rng.uniform(-6, 0));
        REQUIRE(fv <= Y.cwiseAbs().sum() + (Y - A).squaredNorm() / (2 * tau) + 1e-10);
    }
}

TEST_CASE("step_consensus_ell examples")
{
    oracle::Random rng(6);
    const auto s = random_state(rng, 5, 2, 0.5);
    const Vector point = s.consensus_slack + s.consensus_dual / s.rho;
    CHECK(step_consensus_ell(s, Hyperparameters{1, 1, 7, 0.5}, PenaltyModel::fused()) == point);
    CHECK(step_consensus_ell(s, Hyperparameters{1, 1, 0, 0.5}, PenaltyModel::group()) == point);
    CHECK(step_consensus_ell(s, Hyperparameters{1, 1, 1e6, 0.5}, PenaltyModel::group()).isZero(0.0));
}

TEST_CASE("step_z_bcd: consistent nonpositive inputs are a fixed point after one sweep")
{
    oracle::Random rng(7);
    const int n = 5, N = 3;
    auto s = initial_state(n, N, 1.0);
    const Matrix zs = rng.matrix(s.edges(), N).cwiseMin(0.0);
    const Vector z = rng.vector(s.edges()).cwiseMin(0.0) * 0.1;
    s.view_slack = zs;
    s.consensus_slack = z;
    s.view_edges = zs;
    s.view_diff = zs;
    s.view_diff.colwise() -= z;
    s.consensus = z;
    const auto out = step_z_bcd(s, SolverOptions{});
    CHECK(out.converged);
    CHECK(out.sweeps == 1);
    CHECK(max_abs(Matrix(out.view_slack - zs)) <= 1e-15);
    CHECK(max_abs(Vector(out.consensus_slack - z)) <= 1e-15);
}

TEST_CASE("step_z_bcd: N=1, single edge matches a grid search")
{
    oracle::Random rng(8);
    for (int rep = 0; rep < 3; ++rep) {
        auto s = random_state(rng, 2, 1, rng.uniform(0.5, 2.0));
        const auto out = step_z_bcd(s, tight_bcd());
        const SlackProblem prob{s};
        auto f = [&](double a, double b) { return prob.value(Matrix::Constant(1, 1, a), Vector::Constant(1, b)); };
        // coarse grid over [-10, 0]^2 at 1e-3, then refine at 1e-6
        double best = f(0, 0), ba = 0, bb = 0;
        for (int i = 0; i <= 10000; ++i) {
            for (int j = 0; j <= 10000; ++j) {
                const double a = -1e-3 * i, b = -1e-3 * j, v = f(a, b);
                if (v < best) best = v, ba = a, bb = b;
            }
        }
        const double ca = ba, cb = bb;
        for (int i = -1000; i <= 1000; ++i) {
            for (int j = -1000; j <= 1000; ++j) {
                const double a = std::min(0.0, ca + 1e-6 * i), b = std::min(0.0, cb + 1e-6 * j), v = f(a, b);
                if (v < best) best = v, ba = a, bb = b;
            }
        }
        CHECK(std::abs(out.view_slack(0, 0) - ba) <= 2e-6);
        CHECK(std::abs(out.consensus_slack[0] - bb) <= 2e-6);
    }
}

TEST_CASE("step_z_bcd fixed point matches projected gradient on 20 instances")
{
    oracle::Random rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        const auto s = random_state(rng, 3, 2, rng.uniform(0.2, 5.0));
        const auto out = step_z_bcd(s, tight_bcd());
        const auto [zs, z] = SlackProblem{s}.solve();
        CHECK(out.converged);
        CHECK(max_abs(Matrix(out.view_slack - zs)) <= 1e-6);
        CHECK(max_abs(Vector(out.consensus_slack - z)) <= 1e-6);
    }
}

TEST_CASE("step_z_bcd: block optimality, sign constraints and monotone sweeps")
{
    oracle::Random rng(10);
    for (int rep = 0; rep < 20; ++rep) {
        const int N = rng.integer(1, 4);
        const auto s = random_state(rng, rng.integer(3, 7), N, rng.uniform(0.2, 5.0));
        std::vector<double> trace;
        SolverOptions o;
        o.bcd_tol = 1e-300;
        o.max_bcd_iter = 30;
        const auto out = step_z_bcd(s, o, &trace);
        CHECK(out.view_slack.maxCoeff() <= 0.0);
        CHECK(out.consensus_slack.maxCoeff() <= 0.0);
        CHECK(trace.size() == static_cast<std::size_t>(out.sweeps));
        const SlackProblem prob{s};
        const double start = slack_objective(s, s.view_slack, s.consensus_slack);
        CHECK(trace.front() <= start + 1e-12 * std::abs(start));
        for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] <= trace[k - 1] + 1e-12);
        // library objective differs from the Lagrangian terms by a constant
        const double shift = prob.value(out.view_slack, out.consensus_slack) -
                             slack_objective(s, out.view_slack, out.consensus_slack);
        const double shift0 = prob.value(s.view_slack, s.consensus_slack) -
                              slack_objective(s, s.view_slack, s.consensus_slack);
        CHECK(shift == doctest::Approx(shift0).epsilon(1e-10));

        // the consensus block (updated last) satisfies its projected first-order condition
        Matrix gzs;
        Vector gz;
        prob.gradient(out.view_slack, out.consensus_slack, gzs, gz);
        for (Eigen::Index e = 0; e < gz.size(); ++e) {
            const double zval = out.consensus_slack[e];
            if (zval < 0.0) CHECK(std::abs(gz[e]) <= 1e-10 * (1 + std::abs(s.rho)) * 10);
            else CHECK(gz[e] <= 1e-10 * 10);
        }
    }
}

TEST_CASE("dual_updates")
{
    oracle::Random rng(11);
    auto s = random_state(rng, 4, 2, 1.0);
    auto consistent = s;
    consistent.view_edges = consistent.view_slack;
    consistent.consensus = consistent.consensus_slack;
    consistent.view_diff = consistent.view_slack;
    consistent.view_diff.colwise() -= consistent.consensus_slack;
    const auto same = dual_updates(consistent);
    CHECK(same.view_dual == consistent.view_dual);
    CHECK(max_abs(Matrix(same.diff_dual - consistent.diff_dual)) <= 1e-15);
    CHECK(same.consensus_dual == consistent.consensus_dual);

    s.rho = 1.7;
    const auto u = dual_updates(s);
    for (int i = 0; i < 2; ++i) {
        for (Eigen::Index e = 0; e < s.edges(); ++e) {
            CHECK(u.view_dual(e, i) == doctest::Approx(s.view_dual(e, i) + 1.7 * (s.view_slack(e, i) - s.view_edges(e, i))));
            CHECK(u.diff_dual(e, i) ==
                  doctest::Approx(s.diff_dual(e, i) + 1.7 * (s.view_diff(e, i) - s.view_slack(e, i) + s.consensus_slack[e])));
        }
    }
    for (Eigen::Index e = 0; e < s.edges(); ++e) {
        CHECK(u.consensus_dual[e] == doctest::Approx(s.consensus_dual[e] + 1.7 * (s.consensus_slack[e] - s.consensus[e])));
    }
}

TEST_CASE("objective examples")
{
    const int n = 4;
    const auto zero = precompute_statistics(Matrix::Zero(n, 3));
    const auto m = edge_count(n);
    CHECK(objective(Matrix::Zero(m, 1), Vector::Zero(m), {zero}, Hyperparameters{}, PenaltyModel::fused()) == 0.0);

    oracle::Random rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix X = rng.matrix(n, 7);
        const double alpha = rng.uniform(0.1, 3.0);
        const Vector l = graph::project_feasible(n, rng.vector(m));
        const double lib = objective(l, Vector::Zero(m), {precompute_statistics(X)}, Hyperparameters{alpha, 0, 0, 1},
                                     PenaltyModel::fused());
        const double mat = oracle::matrix_objective(X, oracle::dense_laplacian(n, l), alpha);
        CHECK(lib == doctest::Approx(mat).epsilon(1e-10));
        CHECK(view_objective(l, precompute_statistics(X), alpha) == doctest::Approx(mat).epsilon(1e-10));
    }

    // order of the views does not matter
    std::vector<ViewDataset> data;
    Matrix V(m, 3);
    for (int i = 0; i < 3; ++i) {
        data.push_back(random_dataset(rng, n, 5));
        V.col(i) = graph::project_feasible(n, rng.vector(m));
    }
    const Vector c = rng.vector(m).cwiseMin(0.0);
    const Hyperparameters h{1.2, 0.7, 0.3, 1};
    for (const auto& model : {PenaltyModel::fused(), PenaltyModel::group()}) {
        const double a = objective(V, c, data, h, model);
        Matrix W(m, 3);
        W << V.col(2), V.col(0), V.col(1);
        const double b = objective(W, c, {data[2], data[0], data[1]}, h, model);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("admm_solve input validation")
{
    oracle::Random rng(13);
    CHECK_THROWS_AS(admm_solve({random_dataset(rng, 5, 4), random_dataset(rng, 6, 4)}, Hyperparameters{},
                               PenaltyModel::fused()),
                    DimensionMismatch);
    CHECK_THROWS_AS(admm_solve({}, Hyperparameters{}, PenaltyModel::fused()), InvalidData);
    CHECK_THROWS_AS(admm_solve({random_dataset(rng, 5, 4)}, Hyperparameters{-1, 0, 0, 1}, PenaltyModel::fused()),
                    InvalidHyperparameter);
}

TEST_CASE("admm_solve reduces to solve_single for N=1, beta=0")
{
    oracle::Random rng(14);
    for (int rep = 0; rep < 5; ++rep) {
        const auto data = random_dataset(rng, 8, 30);
        const double alpha = rng.uniform(0.5, 5.0);
        const auto multi = admm_solve({data}, Hyperparameters{alpha, 0, 0, 1}, PenaltyModel::fused(), tight_admm());
        const auto single = solve_single(data, alpha, tight_admm());
        CHECK(multi.report.converged);
        CHECK(max_abs(Vector(multi.view_edges[0].values() - single.edges.values())) <= 1e-5);
    }
}

TEST_CASE("identical views with strong coupling collapse onto the single-view solution")
{
    oracle::Random rng(15);
    const auto data = random_dataset(rng, 7, 40);
    const double alpha = 2.0;
    const auto single = solve_single(data, alpha, tight_admm());
    for (const auto& model : {PenaltyModel::fused(), PenaltyModel::group(false)}) {
        const auto sol = admm_solve({data, data, data}, Hyperparameters{alpha, 1e3, 0, 1}, model, tight_admm());
        for (const auto& v : sol.view_edges) {
            CHECK(max_abs(Vector(v.values() - sol.view_edges[0].values())) <= 1e-4);
            CHECK(max_abs(Vector(v.values() - single.edges.values())) <= 1e-4);
        }
    }
}

TEST_CASE("solution invariants and convergence regression at n=20, N=3")
{
    oracle::Random rng(16);
    std::vector<ViewDataset> data;
    for (int i = 0; i < 3; ++i) data.push_back(random_dataset(rng, 20, 100));
    for (const auto& model : {PenaltyModel::fused(), PenaltyModel::group()}) {
        const Hyperparameters h{1.0, 2.0, 0.5, 1.0};
        const auto sol = admm_solve(data, h, model);
        CHECK(sol.report.converged);
        CHECK(sol.report.iterations <= 2000);
        CHECK(sol.report.objective.size() == static_cast<std::size_t>(sol.report.iterations));
        CHECK(sol.report.primal_residual.size() == static_cast<std::size_t>(sol.report.iterations));
        for (const auto& v : sol.view_edges) {
            CHECK(std::abs(v.values().sum() + 20) <= 1e-6);
            CHECK(v.values().maxCoeff() <= 1e-8);
        }
        CHECK(sol.consensus_edges.values().maxCoeff() <= 1e-8);
        // bounded objective history
        const auto [lo, hi] = std::minmax_element(sol.report.objective.begin(), sol.report.objective.end());
        CHECK(std::isfinite(*lo));
        CHECK(std::isfinite(*hi));
        CHECK(std::abs(sol.report.objective.back()) <= 10.0 * std::max(std::abs(*lo), std::abs(sol.report.objective.front())));
    }
}

TEST_CASE("non-convergence returns the best iterate, flagged")
{
    oracle::Random rng(17);
    const auto data = random_dataset(rng, 10, 20);
    SolverOptions o;
    o.max_admm_iter = 3;
    const auto sol = admm_solve({data, data}, Hyperparameters{1, 1, 0, 1}, PenaltyModel::fused(), o);
    CHECK_FALSE(sol.report.converged);
    CHECK(sol.report.iterations == 3);
    for (const auto& v : sol.view_edges) {
        CHECK(std::abs(v.values().sum() + 10) <= 1e-6);
        CHECK(v.values().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("objective homogeneity: (2k, 2d) at 2 alpha, 2 beta, 2 gamma gives the same minimizer")
{
    oracle::Random rng(18);
    std::vector<ViewDataset> data, doubled;
    for (int i = 0; i < 3; ++i) {
        data.push_back(random_dataset(rng, 6, 25));
        auto d = data.back();
        d.k.values() *= 2.0;
        d.d *= 2.0;
        doubled.push_back(d);
    }
    for (const auto& model : {PenaltyModel::fused(), PenaltyModel::group()}) {
        const auto a = admm_solve(data, Hyperparameters{1.5, 3.0, 1.0, 1.0}, model, tight_admm());
        const auto b = admm_solve(doubled, Hyperparameters{3.0, 6.0, 2.0, 1.0}, model, tight_admm());
        for (int i = 0; i < 3; ++i) {
            CHECK(max_abs(Vector(a.view_edges[i].values() - b.view_edges[i].values())) <= 1e-5);
        }
        CHECK(max_abs(Vector(a.consensus_edges.values() - b.consensus_edges.values())) <= 1e-5);
    }
}

TEST_CASE("adaptive rho and sample normalization")
{
    oracle::Random rng(19);
    std::vector<ViewDataset> data;
    for (int i = 0; i < 3; ++i) data.push_back(random_dataset(rng, 12, 200));
    SolverOptions o;
    o.adaptive_rho = true;
    const auto sol = admm_solve(data, Hyperparameters{5.0, 5.0, 0, 1}, PenaltyModel::fused(), o);
    CHECK(sol.report.converged);
    CHECK(sol.report.final_rho > 0.0);

    // normalizing by p equals scaling alpha, beta and gamma by p
    SolverOptions norm = tight_admm();
    norm.normalize_by_samples = true;
    const auto a = admm_solve(data, Hyperparameters{0.02, 0.01, 0, 1}, PenaltyModel::fused(), norm);
    const auto b = admm_solve(data, Hyperparameters{4.0, 2.0, 0, 1}, PenaltyModel::fused(), tight_admm());
    for (int i = 0; i < 3; ++i) CHECK(max_abs(Vector(a.view_edges[i].values() - b.view_edges[i].values())) <= 1e-5);
}

TEST_CASE("n=4, N=2 objective within 1e-4 relative of a projected-subgradient oracle")
{
    oracle::Random rng(20);
    for (const bool fused : {true, false}) {
        for (int rep = 0; rep < 2; ++rep) {
            const std::vector<Matrix> X = {rng.matrix(4, 20), rng.matrix(4, 20)};
            const Hyperparameters h{rng.uniform(0.5, 3.0), rng.uniform(0.5, 5.0), fused ? 0.0 : rng.uniform(0.1, 2.0), 1};
            const auto model = fused ? PenaltyModel::fused() : PenaltyModel::group();
            const auto sol = admm_solve({precompute_statistics(X[0]), precompute_statistics(X[1])}, h, model, tight_admm());
            Matrix V(6, 2);
            V << sol.view_edges[0].values(), sol.view_edges[1].values();

            const oracle::MultiviewSubgradient oracle(X, h.alpha, h.beta, h.gamma, fused);
            const double lib = oracle.value(V, sol.consensus_edges.values());
            const double mine = objective(V, sol.consensus_edges.values(),
                                          {precompute_statistics(X[0]), precompute_statistics(X[1])}, h, model);
            CHECK(mine == doctest::Approx(lib).epsilon(1e-10));
            const auto [W, f] = oracle.solve(1000000);
            CHECK(std::abs(lib - f) <= 1e-4 * std::abs(f));
        }
    }
}
