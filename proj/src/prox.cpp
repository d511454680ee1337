#include "mvgl/prox.hpp"

#include "mvgl/errors.hpp"

#include <cmath>

namespace mvgl {

std::string_view to_string(PenaltyKind kind) noexcept
{
    switch (kind) {
    case PenaltyKind::FusedL1: return "fused_l1";
    case PenaltyKind::GroupL21: return "group_l21";
    }
    return "unknown";
}

namespace prox {

namespace {

void check_threshold(double tau, const char* where)
{
    if (!(tau >= 0.0)) {
        throw InvalidHyperparameter(std::string(where) + ": threshold must be >= 0");
    }
}

} // namespace

double soft_threshold(double x, double tau) noexcept
{
    if (x > tau) return x - tau;
    if (x < -tau) return x + tau;
    return 0.0;
}

Matrix prox_cv(const Matrix& A, double tau, const PenaltyModel& model)
{
    check_threshold(tau, "prox_cv");
    if (tau == 0.0) return A;

    if (model.kind == PenaltyKind::FusedL1) {
        return A.unaryExpr([tau](double x) { return soft_threshold(x, tau); });
    }

    // Row-wise group shrink; a zero row stays zero.
    Matrix out(A.rows(), A.cols());
    for (Eigen::Index a = 0; a < A.rows(); ++a) {
        const double norm = A.row(a).norm();
        const double scale = norm > tau ? 1.0 - tau / norm : 0.0;
        out.row(a) = scale * A.row(a);
    }
    return out;
}

Vector prox_rv(const Eigen::Ref<const Vector>& v, double tau, const PenaltyModel& model)
{
    check_threshold(tau, "prox_rv");
    if (!model.has_consensus_regularizer() || tau == 0.0) return v;
    return v.unaryExpr([tau](double x) { return soft_threshold(x, tau); });
}

EdgeVector prox_rv(const EdgeVector& v, double tau, const PenaltyModel& model)
{
    return EdgeVector(v.nodes(), prox_rv(v.values(), tau, model));
}

PenaltyValue penalty_value(const Matrix& delta, const Eigen::Ref<const Vector>& consensus,
                           const PenaltyModel& model)
{
    if (model.kind == PenaltyKind::FusedL1) {
        return {delta.cwiseAbs().sum(), 0.0};
    }
    const double group = delta.rowwise().norm().sum();
    const double reg = model.sparse_consensus ? consensus.lpNorm<1>() : 0.0;
    return {group, reg};
}

} // namespace prox
} // namespace mvgl
