#pragma once

#include "mvgl/edge_set.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mvgl::datagen {

/// Portable random stream: std::mt19937_64 (fully specified by the standard)
/// with hand-written uniform, bounded-integer and Box-Muller normal draws, so
/// a seed reproduces the same numbers on every conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform(); // [0, 1), 53 random bits
    std::uint64_t below(std::uint64_t bound);
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// splitmix64 finalizer of (seed, stream); used to derive independent
/// per-view streams from one configuration seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

struct GraphModel {
    enum class Kind { ErdosRenyi, BarabasiAlbert };
    Kind kind = Kind::ErdosRenyi;
    double edge_probability = 0.1; // Erdos-Renyi
    int growth = 5;                // Barabasi-Albert edges per new node

    static GraphModel erdos_renyi(double p) { return {Kind::ErdosRenyi, p, 5}; }
    static GraphModel barabasi_albert(int m) { return {Kind::BarabasiAlbert, 0.1, m}; }
};

struct SimulationConfig {
    int n = 100;
    int views = 6;
    int samples = 500;
    double noise = 0.1;
    GraphModel graph_model{};
    double shuffle_fraction = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

struct GroundTruth {
    EdgeSet consensus;
    std::vector<EdgeSet> views;
};

struct SimulatedData {
    GroundTruth truth;
    std::vector<Matrix> signals; // one n x p matrix per view
};

EdgeSet gen_consensus(const GraphModel& model, int n, Rng& rng);

/// Removes floor(fraction * |E|) random edges and inserts as many random pairs
/// that are absent from the input graph.
EdgeSet perturb_view(const EdgeSet& consensus, double shuffle_fraction, Rng& rng);

/// Columns are pinv(L) x0 with x0 ~ N(0, I).
Matrix smooth_signals(const Matrix& laplacian, int samples, Rng& rng);

/// Pseudoinverse of a symmetric PSD matrix; eigenvalues at or below
/// 1e-9 * lambda_max are treated as zero.
Matrix pseudo_inverse(const Matrix& laplacian);

/// X + eta * (||X||_F / ||E||_F) E with E ~ N(0, I).
Matrix add_noise(const Matrix& X, double eta, Rng& rng);

/// Full pipeline: consensus, perturbed views, smooth signals, noise.
/// Stream 0 drives the consensus; view i uses stream i + 1.
SimulatedData simulate(const SimulationConfig& config);

} // namespace mvgl::datagen
