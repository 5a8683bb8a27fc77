#pragma once

#include <span>
#include <vector>

#include "pa/kmeans.hpp"
#include "pa/matrix.hpp"

namespace pa {

/// RBF spread. Strictly positive.
class Gamma {
public:
    explicit Gamma(double value);
    double value() const { return value_; }
    double inv_sq() const { return inv_sq_; }

private:
    double value_;
    double inv_sq_;
};

/// Normalized anchor potentials: non-negative, summing to 1.
struct PotentialProfile {
    std::vector<double> values;
};

/// Class potential of X at query point x:
///   sum_i exp(-(||X_i - x|| / gamma)^2)
/// The empty sum is 0.
double potential(const Matrix& x_set, std::span<const double> x, Gamma gamma);

/// Potential of X at each anchor, divided by the sum over anchors.
/// Throws DegeneratePotential if the normalizing sum falls below 1e-30
/// (gamma grossly mismatched to the data scale).
PotentialProfile normalized_potential(const Matrix& x_set, const AnchorSet& anchors, Gamma gamma);

/// Squared mismatch between the anchor profiles of X and P, summed over
/// anchors, plus lambda * sum_i exp(-(||P_i - P0_i|| / gamma)^2). The
/// regularizer pushes prototypes away from their sampled starting positions.
double resemblance_loss(const Matrix& x_set, const AnchorSet& anchors, const Matrix& prototypes,
                        const Matrix& start_positions, Gamma gamma, double lambda);

/// Analytic gradient of resemblance_loss with respect to the prototype
/// positions. The chain rule passes through the shared normalization
/// denominator, coupling all prototype rows.
Matrix loss_gradient(const Matrix& x_set, const AnchorSet& anchors, const Matrix& prototypes,
                     const Matrix& start_positions, Gamma gamma, double lambda);

} // namespace pa
