#include "mvgl/graph_core.hpp"

#include "mvgl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace mvgl {

EdgeIndexMap::EdgeIndexMap(int n) : n_(n)
{
    if (n < 2) {
        throw InvalidData("EdgeIndexMap needs at least 2 nodes, got " + std::to_string(n));
    }
}

Eigen::Index EdgeIndexMap::index(int i, int j) const
{
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_ || i == j) {
        throw InvalidData("invalid node pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    const Eigen::Index ii = i;
    return ii * n_ - ii * (ii + 1) / 2 + (j - i - 1);
}

std::pair<int, int> EdgeIndexMap::pair(Eigen::Index e) const
{
    if (e < 0 || e >= size()) {
        throw InvalidData("edge index " + std::to_string(e) + " out of range");
    }
    // Row i holds n - 1 - i entries; walk rows rather than invert the
    // quadratic to stay exact.
    int i = 0;
    Eigen::Index start = 0;
    while (start + (n_ - 1 - i) <= e) {
        start += n_ - 1 - i;
        ++i;
    }
    return {i, static_cast<int>(i + 1 + (e - start))};
}

EdgeVector::EdgeVector(int n) : n_(n), values_(Vector::Zero(edge_count(n))) {}

EdgeVector::EdgeVector(int n, Vector values) : n_(n), values_(std::move(values))
{
    if (values_.size() != edge_count(n)) {
        throw DimensionMismatch("edge vector of length " + std::to_string(values_.size())
                                + " does not match n = " + std::to_string(n));
    }
}

EdgeVector EdgeVector::constant(int n, double value)
{
    return EdgeVector(n, Vector::Constant(edge_count(n), value));
}

int nodes_from_edge_count(Eigen::Index m)
{
    const auto n = static_cast<int>(std::llround((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(m))) / 2.0));
    if (edge_count(n) != m) {
        throw InvalidData(std::to_string(m) + " is not a triangular edge count");
    }
    return n;
}

namespace graph {

EdgeVector upper(const Matrix& M)
{
    if (M.rows() != M.cols()) {
        throw InvalidMatrix("upper() needs a square matrix, got " + std::to_string(M.rows()) + "x"
                            + std::to_string(M.cols()));
    }
    const auto n = static_cast<int>(M.rows());
    EdgeVector out(n);
    Eigen::Index e = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++e) {
            if (std::abs(M(i, j) - M(j, i)) > kSymmetryTolerance || !std::isfinite(M(i, j))) {
                throw InvalidMatrix("matrix is not symmetric at (" + std::to_string(i) + ", "
                                    + std::to_string(j) + ")");
            }
            out[e] = M(i, j);
        }
    }
    return out;
}

Matrix laplacian_from_edges(const EdgeVector& edges)
{
    const int n = edges.nodes();
    Matrix L = Matrix::Zero(n, n);
    Eigen::Index e = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++e) {
            L(i, j) = edges[e];
            L(j, i) = edges[e];
        }
    }
    L.diagonal() = -apply_S(edges);
    return L;
}

bool is_valid_laplacian(const Matrix& L, double tol)
{
    if (L.rows() != L.cols()) return false;
    const auto n = L.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (std::abs(L(i, j) - L(j, i)) > tol) return false;
            if (L(i, j) > tol) return false;
        }
    }
    return (L.rowwise().sum().array().abs() <= tol).all();
}

Vector apply_S(int n, const Eigen::Ref<const Vector>& edges)
{
    Vector out = Vector::Zero(n);
    Eigen::Index e = 0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = i + 1; j < n; ++j, ++e) {
            row += edges[e];
            out[j] += edges[e];
        }
        out[i] += row;
    }
    return out;
}

Vector apply_S(const EdgeVector& edges)
{
    return apply_S(edges.nodes(), edges.values());
}

Vector apply_S_transpose(const Eigen::Ref<const Vector>& node_values)
{
    const auto n = static_cast<int>(node_values.size());
    Vector out(edge_count(n));
    Eigen::Index e = 0;
    for (int i = 0; i < n; ++i) {
        const double xi = node_values[i];
        const auto len = n - 1 - i;
        out.segment(e, len) = node_values.tail(len).array() + xi;
        e += len;
    }
    return out;
}

Vector apply_StS_shifted(int n, const Eigen::Ref<const Vector>& edges, double a, double c)
{
    Vector out = c * edges;
    if (a != 0.0) out += a * apply_S_transpose(apply_S(n, edges));
    return out;
}

Vector solve_M(int n, const Eigen::Ref<const Vector>& rhs, double alpha, double rho)
{
    if (!(alpha > 0.0) || !(rho > 0.0)) {
        throw InvalidHyperparameter("solve_M needs alpha > 0 and rho > 0");
    }
    const double c = 4.0 * alpha + rho;
    const double two_alpha = 2.0 * alpha;
    const double gamma0 = c + two_alpha * (n - 2);

    // (c I + 2 alpha S S^T)^{-1} S v, with S S^T = (n - 2) I + 1 1^T.
    Vector s = apply_S(n, rhs);
    s = (s.array() - (two_alpha / (gamma0 + two_alpha * n)) * s.sum()).matrix() / gamma0;

    return (rhs - two_alpha * apply_S_transpose(s)) / c;
}

Vector project_hyperplane(int n, const Eigen::Ref<const Vector>& edges)
{
    const auto m = static_cast<double>(edges.size());
    const double shift = (edges.sum() + n) / m;
    return edges.array() - shift;
}

Vector project_feasible(int n, const Eigen::Ref<const Vector>& edges)
{
    // With u = -x this is the projection of -edges onto the simplex of
    // radius n; the answer is max(u - theta, 0) for a scalar theta.
    std::vector<double> u(edges.data(), edges.data() + edges.size());
    for (double& v : u) v = -v;
    std::sort(u.begin(), u.end(), std::greater<>());

    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        cumulative += u[k];
        const double candidate = (cumulative - n) / static_cast<double>(k + 1);
        if (u[k] - candidate > 0.0) theta = candidate;
    }
    return (-((-edges.array() - theta).max(0.0))).matrix();
}

} // namespace graph
} // namespace mvgl
