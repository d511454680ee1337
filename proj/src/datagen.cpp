#include "mvgl/datagen.hpp"

#include "mvgl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mvgl::datagen {

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound)
{
    if (bound == 0) return 0;
    // Reject the incomplete top block so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
                                - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
}

double Rng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void SimulationConfig::validate() const
{
    if (n < 3) throw InvalidConfig("n must be >= 3");
    if (views < 1) throw InvalidConfig("views must be >= 1");
    if (samples < 1) throw InvalidConfig("samples must be >= 1");
    if (!(noise >= 0.0) || !std::isfinite(noise)) throw InvalidConfig("noise (eta) must be >= 0");
    if (!(shuffle_fraction >= 0.0 && shuffle_fraction <= 1.0)) {
        throw InvalidConfig("shuffle_fraction must lie in [0, 1]");
    }
    if (graph_model.kind == GraphModel::Kind::ErdosRenyi) {
        if (!(graph_model.edge_probability >= 0.0 && graph_model.edge_probability <= 1.0)) {
            throw InvalidConfig("edge_probability must lie in [0, 1]");
        }
    } else {
        if (graph_model.growth < 1) throw InvalidConfig("growth must be >= 1");
        if (n < graph_model.growth + 1) throw InvalidConfig("n too small for the Barabasi-Albert seed clique");
    }
}

namespace {

EdgeSet erdos_renyi(int n, double p, Rng& rng)
{
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.uniform() < p) edges.emplace_back(i, j);
        }
    }
    return EdgeSet(n, std::move(edges));
}

EdgeSet barabasi_albert(int n, int growth, Rng& rng)
{
    if (growth < 1 || n < growth + 1) {
        throw InvalidConfig("n too small for the Barabasi-Albert seed clique");
    }
    std::vector<Edge> edges;
    // Each node appears once per incident edge, so uniform draws from this
    // list are degree-proportional.
    std::vector<int> endpoints;
    const int seed_nodes = growth + 1;
    for (int i = 0; i < seed_nodes; ++i) {
        for (int j = i + 1; j < seed_nodes; ++j) {
            edges.emplace_back(i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    }
    std::vector<int> targets;
    for (int node = seed_nodes; node < n; ++node) {
        targets.clear();
        while (static_cast<int>(targets.size()) < growth) {
            const int t = endpoints[rng.below(endpoints.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
        }
        for (int t : targets) {
            edges.emplace_back(t, node);
            endpoints.push_back(t);
            endpoints.push_back(node);
        }
    }
    return EdgeSet(n, std::move(edges));
}

// First k entries of a partial Fisher-Yates shuffle.
template <class T>
std::vector<T> sample_without_replacement(std::vector<T> pool, std::size_t k, Rng& rng)
{
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + rng.below(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

} // namespace

EdgeSet gen_consensus(const GraphModel& model, int n, Rng& rng)
{
    if (model.kind == GraphModel::Kind::ErdosRenyi) return erdos_renyi(n, model.edge_probability, rng);
    return barabasi_albert(n, model.growth, rng);
}

EdgeSet perturb_view(const EdgeSet& consensus, double shuffle_fraction, Rng& rng)
{
    if (!(shuffle_fraction >= 0.0 && shuffle_fraction <= 1.0)) {
        throw InvalidConfig("shuffle_fraction must lie in [0, 1]");
    }
    const int n = consensus.nodes();
    const auto count = static_cast<std::size_t>(std::floor(shuffle_fraction * static_cast<double>(consensus.size())));

    std::vector<Edge> absent;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!consensus.contains(i, j)) absent.emplace_back(i, j);
        }
    }
    if (shuffle_fraction > 0.0 && absent.empty()) {
        throw InvalidConfig("graph is complete: no absent pairs to shuffle edges into");
    }
    if (absent.size() < count) {
        throw InvalidConfig("graph too dense to insert " + std::to_string(count) + " replacement edges");
    }
    if (count == 0) return consensus;

    std::vector<Edge> kept = consensus.edges();
    const auto removed = sample_without_replacement(kept, count, rng);
    kept.erase(std::remove_if(kept.begin(), kept.end(),
                              [&](const Edge& e) {
                                  return std::find(removed.begin(), removed.end(), e) != removed.end();
                              }),
               kept.end());
    const auto inserted = sample_without_replacement(std::move(absent), count, rng);
    kept.insert(kept.end(), inserted.begin(), inserted.end());
    return EdgeSet(n, std::move(kept));
}

Matrix pseudo_inverse(const Matrix& laplacian)
{
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(laplacian);
    if (eig.info() != Eigen::Success) throw InvalidData("eigendecomposition failed");
    const Vector& values = eig.eigenvalues();
    const double cutoff = 1e-9 * values.cwiseAbs().maxCoeff();
    Vector inverted(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        inverted[i] = values[i] > cutoff && values[i] > 0.0 ? 1.0 / values[i] : 0.0;
    }
    return eig.eigenvectors() * inverted.asDiagonal() * eig.eigenvectors().transpose();
}

Matrix smooth_signals(const Matrix& laplacian, int samples, Rng& rng)
{
    const auto n = laplacian.rows();
    Matrix white(n, samples);
    for (Eigen::Index c = 0; c < samples; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) white(r, c) = rng.normal();
    }
    return pseudo_inverse(laplacian) * white;
}

Matrix add_noise(const Matrix& X, double eta, Rng& rng)
{
    if (!(eta >= 0.0)) throw InvalidConfig("noise level must be >= 0");
    const double signal_norm = X.norm();
    if (eta == 0.0 || signal_norm == 0.0) return X;

    Matrix noise(X.rows(), X.cols());
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        for (Eigen::Index r = 0; r < X.rows(); ++r) noise(r, c) = rng.normal();
    }
    return X + (eta * signal_norm / noise.norm()) * noise;
}

SimulatedData simulate(const SimulationConfig& config)
{
    config.validate();
    SimulatedData out;

    Rng consensus_rng(derive_seed(config.seed, 0));
    out.truth.consensus = gen_consensus(config.graph_model, config.n, consensus_rng);

    out.truth.views.resize(static_cast<std::size_t>(config.views));
    out.signals.resize(static_cast<std::size_t>(config.views));
    for (int i = 0; i < config.views; ++i) {
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(i) + 1));
        auto& view = out.truth.views[static_cast<std::size_t>(i)];
        view = perturb_view(out.truth.consensus, config.shuffle_fraction, rng);
        const Matrix clean = smooth_signals(view.laplacian(), config.samples, rng);
        out.signals[static_cast<std::size_t>(i)] = add_noise(clean, config.noise, rng);
    }
    return out;
}

} // namespace mvgl::datagen
