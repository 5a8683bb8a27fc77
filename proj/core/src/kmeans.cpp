#include "pa/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pa/errors.hpp"
#include "pa/rng.hpp"

namespace pa {

namespace {

constexpr double kShiftTolerance = 1e-6;
constexpr std::size_t kMaxIterations = 300;

std::size_t nearest_centroid(const Matrix& centroids, std::span<const double> point) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double dist = squared_distance(centroids.row(c), point);
        if (dist < best_dist) { // ties keep the lower centroid index
            best_dist = dist;
            best = c;
        }
    }
    return best;
}

std::size_t count_distinct_rows(const Matrix& x) {
    std::vector<std::size_t> distinct;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        bool seen = false;
        for (std::size_t d : distinct) {
            if (std::equal(x.row(r).begin(), x.row(r).end(), x.row(d).begin())) {
                seen = true;
                break;
            }
        }
        if (!seen) distinct.push_back(r);
    }
    return distinct.size();
}

// k-means++: first centroid uniform, the rest sampled proportionally to the
// squared distance from the nearest centroid chosen so far.
Matrix plus_plus_init(const Matrix& x, std::size_t k, Rng& rng) {
    const std::size_t n = x.rows();
    Matrix centroids(0, 0);
    std::uniform_int_distribution<std::size_t> uniform_row(0, n - 1);
    centroids.append_row(x.row(uniform_row(rng)));

    std::vector<double> dist_sq(n);
    while (centroids.rows() < k) {
        double total = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < centroids.rows(); ++c) {
                best = std::min(best, squared_distance(x.row(r), centroids.row(c)));
            }
            dist_sq[r] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> uniform(0.0, total);
            const double target = uniform(rng);
            double acc = 0.0;
            std::size_t last_positive = 0;
            bool found = false;
            for (std::size_t r = 0; r < n; ++r) {
                if (dist_sq[r] > 0.0) last_positive = r;
                acc += dist_sq[r];
                if (acc > target && dist_sq[r] > 0.0) {
                    pick = r;
                    found = true;
                    break;
                }
            }
            if (!found) pick = last_positive;
        } else {
            pick = uniform_row(rng); // all rows coincide with a centroid; unreachable after reduction
        }
        centroids.append_row(x.row(pick));
    }
    return centroids;
}

} // namespace

double kmeans_inertia(const Matrix& x, const Matrix& centroids) {
    double total = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const std::size_t c = nearest_centroid(centroids, x.row(r));
        total += squared_distance(centroids.row(c), x.row(r));
    }
    return total;
}

AnchorSet kmeans_anchors(const Matrix& x, std::size_t k, std::uint64_t seed,
                         const std::function<void(double)>& inertia_trace) {
    if (x.empty()) throw Error("kmeans_anchors: empty input");
    if (k == 0) throw Error("kmeans_anchors: k must be >= 1");

    const std::size_t requested = k;
    k = std::min(k, count_distinct_rows(x));

    Rng rng(seed);
    Matrix centroids = plus_plus_init(x, k, rng);
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    std::vector<std::size_t> assignment(n);

    for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
        for (std::size_t r = 0; r < n; ++r) {
            assignment[r] = nearest_centroid(centroids, x.row(r));
        }

        Matrix sums(k, d, 0.0);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t r = 0; r < n; ++r) {
            auto sum = sums.row(assignment[r]);
            const auto row = x.row(r);
            for (std::size_t c = 0; c < d; ++c) sum[c] += row[c];
            ++counts[assignment[r]];
        }

        // An emptied cluster steals the point farthest from its centroid.
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            double worst = -1.0;
            std::size_t steal = 0;
            for (std::size_t r = 0; r < n; ++r) {
                if (counts[assignment[r]] <= 1) continue;
                const double dist = squared_distance(centroids.row(assignment[r]), x.row(r));
                if (dist > worst) {
                    worst = dist;
                    steal = r;
                }
            }
            auto old_sum = sums.row(assignment[steal]);
            const auto stolen = x.row(steal);
            for (std::size_t col = 0; col < d; ++col) old_sum[col] -= stolen[col];
            --counts[assignment[steal]];
            assignment[steal] = c;
            auto new_sum = sums.row(c);
            for (std::size_t col = 0; col < d; ++col) new_sum[col] = stolen[col];
            counts[c] = 1;
        }

        double max_shift_sq = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            auto sum = sums.row(c);
            auto old_row = centroids.row(c);
            double shift_sq = 0.0;
            for (std::size_t col = 0; col < d; ++col) {
                const double updated = sum[col] / static_cast<double>(counts[c]);
                const double diff = updated - old_row[col];
                shift_sq += diff * diff;
                old_row[col] = updated;
            }
            max_shift_sq = std::max(max_shift_sq, shift_sq);
        }
        if (inertia_trace) inertia_trace(kmeans_inertia(x, centroids));
        if (std::sqrt(max_shift_sq) < kShiftTolerance) break;
    }

    AnchorSet anchors;
    anchors.points = std::move(centroids);
    anchors.k = k;
    anchors.requested_k = requested;
    return anchors;
}

} // namespace pa
