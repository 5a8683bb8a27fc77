#pragma once

#include <cstdint>
#include <functional>

#include "pa/matrix.hpp"

namespace pa {

/// Anchor points at which normalized potentials are evaluated.
struct AnchorSet {
    Matrix points;              // k x d
    std::size_t k = 0;          // effective count, == points.rows()
    std::size_t requested_k = 0;

    bool reduced() const { return k < requested_k; }
};

/// Lloyd's algorithm with k-means++ seeding, run to convergence (max centroid
/// shift < 1e-6) or 300 iterations. If the data has fewer than k distinct
/// rows, k is reduced to that count (check AnchorSet::reduced()).
/// `inertia_trace`, when set, receives the inertia after every iteration.
AnchorSet kmeans_anchors(const Matrix& x, std::size_t k, std::uint64_t seed,
                         const std::function<void(double)>& inertia_trace = nullptr);

/// Sum of squared distances from each row to its nearest anchor.
double kmeans_inertia(const Matrix& x, const Matrix& centroids);

} // namespace pa
