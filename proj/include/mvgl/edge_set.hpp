#pragma once

#include "mvgl/graph_core.hpp"

#include <utility>
#include <vector>

namespace mvgl {

using Edge = std::pair<int, int>;

/// Unweighted undirected graph: sorted, duplicate-free pairs with i < j.
class EdgeSet {
public:
    EdgeSet() = default;
    explicit EdgeSet(int n, std::vector<Edge> edges = {});

    int nodes() const noexcept { return n_; }
    std::size_t size() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return edges_.empty(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    bool contains(int i, int j) const;

    /// Edge vector with -1 on every edge (unit-weight Laplacian off-diagonals).
    EdgeVector to_edge_vector() const;
    Matrix laplacian() const;

    friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
};

} // namespace mvgl
