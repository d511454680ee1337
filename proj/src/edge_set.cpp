#include "mvgl/edge_set.hpp"

#include "mvgl/errors.hpp"

#include <algorithm>
#include <string>

namespace mvgl {

EdgeSet::EdgeSet(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges))
{
    for (auto& [i, j] : edges_) {
        if (i > j) std::swap(i, j);
        if (i < 0 || j >= n_ || i == j) {
            throw InvalidData("edge (" + std::to_string(i) + ", " + std::to_string(j) + ") invalid for n = "
                              + std::to_string(n_));
        }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool EdgeSet::contains(int i, int j) const
{
    if (i > j) std::swap(i, j);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

EdgeVector EdgeSet::to_edge_vector() const
{
    EdgeVector out(n_);
    if (n_ < 2) return out;
    const EdgeIndexMap index(n_);
    for (const auto& [i, j] : edges_) out[index.index(i, j)] = -1.0;
    return out;
}

Matrix EdgeSet::laplacian() const
{
    return graph::laplacian_from_edges(to_edge_vector());
}

} // namespace mvgl
