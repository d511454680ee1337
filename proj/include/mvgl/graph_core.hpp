#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>

namespace mvgl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Number of node pairs i<j on n nodes.
constexpr Eigen::Index edge_count(int n) noexcept
{
    return static_cast<Eigen::Index>(n) * (n - 1) / 2;
}

/// Bijection between node pairs (i, j), i < j, and row-major positions in
/// the strict upper triangle.
class EdgeIndexMap {
public:
    explicit EdgeIndexMap(int n);

    int nodes() const noexcept { return n_; }
    Eigen::Index size() const noexcept { return edge_count(n_); }

    Eigen::Index index(int i, int j) const;
    std::pair<int, int> pair(Eigen::Index e) const;

private:
    int n_;
};

/// Strict upper triangle of a symmetric n x n matrix, flattened row-major.
/// For a Laplacian the entries are the (nonpositive) off-diagonals.
class EdgeVector {
public:
    EdgeVector() = default;
    explicit EdgeVector(int n);
    EdgeVector(int n, Vector values);

    static EdgeVector constant(int n, double value);

    int nodes() const noexcept { return n_; }
    Eigen::Index size() const noexcept { return values_.size(); }

    const Vector& values() const noexcept { return values_; }
    Vector& values() noexcept { return values_; }

    double operator[](Eigen::Index e) const { return values_[e]; }
    double& operator[](Eigen::Index e) { return values_[e]; }

    friend bool operator==(const EdgeVector& a, const EdgeVector& b)
    {
        return a.n_ == b.n_ && a.values_ == b.values_;
    }

private:
    int n_ = 0;
    Vector values_;
};

/// Infers n from m = n(n-1)/2; throws InvalidData when m is not triangular.
int nodes_from_edge_count(Eigen::Index m);

namespace graph {

inline constexpr double kSymmetryTolerance = 1e-9;

EdgeVector upper(const Matrix& M);

/// Laplacian whose off-diagonals are the given edge values. Rows sum to zero
/// by construction; sign feasibility is not checked.
Matrix laplacian_from_edges(const EdgeVector& edges);

/// Symmetric, nonpositive off-diagonals, zero row sums (absolute tolerance).
bool is_valid_laplacian(const Matrix& L, double tol = kSymmetryTolerance);

// Incidence operator S (n x m) and friends, all matrix-free and O(m).
// S * upper(X) = X * 1 for symmetric zero-diagonal X.
Vector apply_S(int n, const Eigen::Ref<const Vector>& edges);
Vector apply_S(const EdgeVector& edges);

Vector apply_S_transpose(const Eigen::Ref<const Vector>& node_values);

/// (a * S^T S + c * I) * edges
Vector apply_StS_shifted(int n, const Eigen::Ref<const Vector>& edges, double a, double c);

/// Solves (2 alpha S^T S + (4 alpha + rho) I) x = rhs in O(m), using
/// S S^T = (n - 2) I + 1 1^T and the Woodbury identity.
Vector solve_M(int n, const Eigen::Ref<const Vector>& rhs, double alpha, double rho);

/// Euclidean projection onto {x : 1^T x = -n}.
Vector project_hyperplane(int n, const Eigen::Ref<const Vector>& edges);

/// Euclidean projection onto {x : x <= 0, 1^T x = -n}, the feasible set of a
/// single view.
Vector project_feasible(int n, const Eigen::Ref<const Vector>& edges);

} // namespace graph
} // namespace mvgl
