#include "mvgl/datagen.hpp"
#include "mvgl/errors.hpp"
#include "mvgl/evaluation.hpp"
#include "mvgl/graph_core.hpp"
#include "mvgl/prox.hpp"
#include "mvgl/solver.hpp"
#include "mvgl/svgl.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mvgl;

namespace {

EdgeVector edge_vector(const Vector& values)
{
    return EdgeVector(nodes_from_edge_count(values.size()), values);
}

std::vector<ViewDataset> datasets(const std::vector<Matrix>& signals)
{
    std::vector<ViewDataset> out;
    for (const auto& X : signals) out.push_back(precompute_statistics(X));
    return out;
}

PenaltyModel penalty(const std::string& name)
{
    if (name == "l1" || name == "fused") return PenaltyModel::fused();
    if (name == "l2" || name == "group") return PenaltyModel::group(true);
    if (name == "l2_noreg") return PenaltyModel::group(false);
    throw InvalidConfig("unknown penalty '" + name + "' (expected l1, l2 or l2_noreg)");
}

std::vector<Vector> values_of(const std::vector<EdgeVector>& edges)
{
    std::vector<Vector> out;
    for (const auto& e : edges) out.push_back(e.values());
    return out;
}

EdgeSet edge_set(int n, const std::vector<Edge>& edges) { return EdgeSet(n, edges); }

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Multiview graph learning from smooth signals";

    static py::exception<Error> base(m, "MvglError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            base(e.what());
        }
    });

    py::class_<Hyperparameters>(m, "Hyperparameters")
        .def(py::init([](double alpha, double beta, double gamma, double rho) {
                 Hyperparameters h{alpha, beta, gamma, rho};
                 h.validate();
                 return h;
             }),
             py::arg("alpha") = 1.0, py::arg("beta") = 0.0, py::arg("gamma") = 0.0, py::arg("rho") = 1.0)
        .def_readwrite("alpha", &Hyperparameters::alpha)
        .def_readwrite("beta", &Hyperparameters::beta)
        .def_readwrite("gamma", &Hyperparameters::gamma)
        .def_readwrite("rho", &Hyperparameters::rho)
        .def("__repr__", [](const Hyperparameters& h) {
            return "Hyperparameters(alpha=" + std::to_string(h.alpha) + ", beta=" + std::to_string(h.beta) +
                   ", gamma=" + std::to_string(h.gamma) + ", rho=" + std::to_string(h.rho) + ")";
        });

    py::class_<SolverOptions>(m, "SolverOptions")
        .def(py::init<>())
        .def_readwrite("max_admm_iter", &SolverOptions::max_admm_iter)
        .def_readwrite("max_bcd_iter", &SolverOptions::max_bcd_iter)
        .def_readwrite("eps_abs", &SolverOptions::eps_abs)
        .def_readwrite("eps_rel", &SolverOptions::eps_rel)
        .def_readwrite("bcd_tol", &SolverOptions::bcd_tol)
        .def_readwrite("adaptive_rho", &SolverOptions::adaptive_rho)
        .def_readwrite("normalize_by_samples", &SolverOptions::normalize_by_samples)
        .def_readwrite("record_history", &SolverOptions::record_history);

    py::class_<ConvergenceReport>(m, "ConvergenceReport")
        .def_readonly("iterations", &ConvergenceReport::iterations)
        .def_readonly("converged", &ConvergenceReport::converged)
        .def_readonly("final_rho", &ConvergenceReport::final_rho)
        .def_readonly("primal_residual", &ConvergenceReport::primal_residual)
        .def_readonly("dual_residual", &ConvergenceReport::dual_residual)
        .def_readonly("objective", &ConvergenceReport::objective);

    m.def("edge_count", [](int n) { return edge_count(n); });
    m.def("upper", [](const Matrix& M) { return graph::upper(M).values(); }, py::arg("matrix"));
    m.def("laplacian_from_edges", [](const Vector& l) { return graph::laplacian_from_edges(edge_vector(l)); },
          py::arg("edges"));
    m.def("is_valid_laplacian", &graph::is_valid_laplacian, py::arg("L"), py::arg("tol") = graph::kSymmetryTolerance);
    m.def("apply_S", [](const Vector& l) { return graph::apply_S(edge_vector(l)); }, py::arg("edges"));
    m.def("apply_S_transpose", [](const Vector& x) { return graph::apply_S_transpose(x); }, py::arg("node_values"));
    m.def("project_feasible", [](const Vector& l) { return graph::project_feasible(nodes_from_edge_count(l.size()), l); },
          py::arg("edges"));

    m.def("prox_cv", [](const Matrix& A, double tau, const std::string& p) { return prox::prox_cv(A, tau, penalty(p)); },
          py::arg("A"), py::arg("tau"), py::arg("penalty") = "l1",
          "Proximal map of the view-difference penalty; columns of A are views.");
    m.def("prox_rv", [](const Vector& a, double tau, const std::string& p) { return prox::prox_rv(a, tau, penalty(p)); },
          py::arg("a"), py::arg("tau"), py::arg("penalty") = "l1");

    m.def(
        "simulate",
        [](int n, int views, int samples, double noise, const std::string& graph, double edge_probability, int growth,
           double shuffle_fraction, std::uint64_t seed) {
            datagen::SimulationConfig c;
            c.n = n;
            c.views = views;
            c.samples = samples;
            c.noise = noise;
            if (graph == "erdos_renyi" || graph == "er") c.graph_model = datagen::GraphModel::erdos_renyi(edge_probability);
            else if (graph == "barabasi_albert" || graph == "ba") c.graph_model = datagen::GraphModel::barabasi_albert(growth);
            else throw InvalidConfig("graph must be erdos_renyi or barabasi_albert");
            c.shuffle_fraction = shuffle_fraction;
            c.seed = seed;
            const auto data = datagen::simulate(c);
            py::dict out;
            out["signals"] = data.signals;
            out["truth_consensus"] = data.truth.consensus.edges();
            std::vector<std::vector<Edge>> truth_views;
            for (const auto& v : data.truth.views) truth_views.push_back(v.edges());
            out["truth_views"] = truth_views;
            return out;
        },
        py::arg("n") = 100, py::arg("views") = 6, py::arg("samples") = 500, py::arg("noise") = 0.1,
        py::arg("graph") = "erdos_renyi", py::arg("edge_probability") = 0.1, py::arg("growth") = 5,
        py::arg("shuffle_fraction") = 0.1, py::arg("seed") = 0,
        "Synthetic multiview data: per-view n x p signal matrices and true edge lists.");

    m.def(
        "solve_single",
        [](const Matrix& X, double alpha, const SolverOptions& options, double rho) {
            auto s = solve_single(precompute_statistics(X), alpha, options, rho);
            return py::make_tuple(s.edges.values(), s.report);
        },
        py::arg("X"), py::arg("alpha"), py::arg("options") = SolverOptions{}, py::arg("rho") = 1.0);

    m.def(
        "admm_solve",
        [](const std::vector<Matrix>& signals, const Hyperparameters& hyper, const std::string& p,
           const SolverOptions& options) {
            auto s = admm_solve(datasets(signals), hyper, penalty(p), options);
            return py::make_tuple(values_of(s.view_edges), s.consensus_edges.values(), s.report);
        },
        py::arg("signals"), py::arg("hyper"), py::arg("penalty") = "l1", py::arg("options") = SolverOptions{},
        "Returns (view edge vectors, consensus edge vector, report).");

    m.def(
        "objective",
        [](const std::vector<Vector>& views, const Vector& consensus, const std::vector<Matrix>& signals,
           const Hyperparameters& hyper, const std::string& p) {
            Matrix V(consensus.size(), static_cast<Eigen::Index>(views.size()));
            for (std::size_t i = 0; i < views.size(); ++i) V.col(static_cast<Eigen::Index>(i)) = views[i];
            return objective(V, consensus, datasets(signals), hyper, penalty(p));
        },
        py::arg("views"), py::arg("consensus"), py::arg("signals"), py::arg("hyper"), py::arg("penalty") = "l1");

    m.def(
        "binarize",
        [](const Vector& l, double relative, std::optional<std::size_t> top_k) {
            const auto rule = top_k ? eval::BinarizeRule::top(*top_k) : eval::BinarizeRule::relative_threshold(relative);
            return eval::binarize(edge_vector(l), rule).edges();
        },
        py::arg("edges"), py::arg("relative") = 1e-4, py::arg("top_k") = py::none());
    m.def(
        "f1",
        [](const std::vector<Edge>& predicted, const std::vector<Edge>& truth, int n) {
            return eval::f1(edge_set(n, predicted), edge_set(n, truth));
        },
        py::arg("predicted"), py::arg("truth"), py::arg("n"));
    m.def(
        "pairwise_correlation",
        [](const std::vector<Vector>& views) {
            std::vector<EdgeVector> v;
            for (const auto& x : views) v.push_back(edge_vector(x));
            return eval::pairwise_correlation(v);
        },
        py::arg("views"));

    m.def(
        "tune_beta",
        [](const std::vector<Matrix>& signals, const std::string& method, const Hyperparameters& base, double target,
           double tolerance, const SolverOptions& options) {
            eval::BetaSearch search;
            search.target = target;
            search.tolerance = tolerance;
            const auto r = eval::tune_beta(datasets(signals), eval::parse_method(method), base, options, search);
            py::dict out;
            out["beta"] = r.value;
            out["achieved"] = r.achieved;
            out["attained"] = r.attained;
            std::vector<std::pair<double, double>> trace;
            for (const auto& p : r.trace) trace.emplace_back(p.value, p.statistic);
            out["trace"] = trace;
            return out;
        },
        py::arg("signals"), py::arg("method") = "l1", py::arg("base") = Hyperparameters{}, py::arg("target") = 0.8,
        py::arg("tolerance") = 0.02, py::arg("options") = SolverOptions{});
}
