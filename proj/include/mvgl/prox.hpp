#pragma once

#include "mvgl/graph_core.hpp"

#include <string>
#include <string_view>

namespace mvgl {

enum class PenaltyKind {
    FusedL1,  // c_v = ||Delta||_{1,1}, r_v = 0
    GroupL21, // c_v = ||Delta||_{2,1}, r_v = ||l||_1
};

/// Consensus penalty c_v on the view-minus-consensus matrix Delta (m x N)
/// together with the consensus regularizer r_v.
struct PenaltyModel {
    PenaltyKind kind = PenaltyKind::FusedL1;
    // GroupL21 only: when false r_v is dropped entirely (gamma is ignored).
    bool sparse_consensus = true;

    static PenaltyModel fused() { return {PenaltyKind::FusedL1, false}; }
    static PenaltyModel group(bool sparse_consensus = true) { return {PenaltyKind::GroupL21, sparse_consensus}; }

    bool has_consensus_regularizer() const noexcept
    {
        return kind == PenaltyKind::GroupL21 && sparse_consensus;
    }
};

std::string_view to_string(PenaltyKind kind) noexcept;

namespace prox {

double soft_threshold(double x, double tau) noexcept;

/// argmin_X c_v(X) + 1/(2 tau) ||X - A||_F^2
Matrix prox_cv(const Matrix& A, double tau, const PenaltyModel& model);

/// argmin_x r_v(x) + 1/(2 tau) ||x - v||^2
Vector prox_rv(const Eigen::Ref<const Vector>& v, double tau, const PenaltyModel& model);
EdgeVector prox_rv(const EdgeVector& v, double tau, const PenaltyModel& model);

struct PenaltyValue {
    double consensus = 0.0;   // c_v(Delta)
    double regularizer = 0.0; // r_v(l)
};

PenaltyValue penalty_value(const Matrix& delta, const Eigen::Ref<const Vector>& consensus,
                           const PenaltyModel& model);

} // namespace prox
} // namespace mvgl
