#include "pa/potential.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pa/errors.hpp"

namespace pa {

namespace {

constexpr double kDenominatorGuard = 1e-30;

void check_dims(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": " + std::to_string(a) + " vs " +
                                std::to_string(b));
    }
}

// Per-(anchor, point) RBF responses phi[i][j] = exp(-||A_i - X_j||^2 / gamma^2),
// their per-anchor sums, and the normalization denominator.
struct AnchorResponses {
    Matrix phi;                    // k x n
    std::vector<double> anchor_sums; // length k
    double denom = 0.0;
};

AnchorResponses anchor_responses(const Matrix& x_set, const AnchorSet& anchors, Gamma gamma) {
    const std::size_t k = anchors.points.rows();
    const std::size_t n = x_set.rows();
    AnchorResponses r;
    r.phi = Matrix(k, n);
    r.anchor_sums.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const auto anchor = anchors.points.row(i);
        auto phi_row = r.phi.row(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double value =
                std::exp(-squared_distance(x_set.row(j), anchor) * gamma.inv_sq());
            phi_row[j] = value;
            sum += value;
        }
        r.anchor_sums[i] = sum;
        r.denom += sum;
    }
    return r;
}

std::vector<double> profile_from(const AnchorResponses& r) {
    if (r.denom < kDenominatorGuard) {
        throw DegeneratePotential("normalized_potential: anchor potential sum " +
                                  std::to_string(r.denom) + " below guard; gamma is "
                                  "mismatched to the data scale");
    }
    std::vector<double> psi(r.anchor_sums.size());
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = r.anchor_sums[i] / r.denom;
    return psi;
}

} // namespace

Gamma::Gamma(double value) : value_(value), inv_sq_(1.0 / (value * value)) {
    if (!(value > 0.0)) {
        throw std::invalid_argument("Gamma must be positive, got " + std::to_string(value));
    }
}

double potential(const Matrix& x_set, std::span<const double> x, Gamma gamma) {
    if (!x_set.empty()) check_dims(x_set.cols(), x.size(), "potential: point dimension");
    double sum = 0.0;
    for (std::size_t i = 0; i < x_set.rows(); ++i) {
        sum += std::exp(-squared_distance(x_set.row(i), x) * gamma.inv_sq());
    }
    return sum;
}

PotentialProfile normalized_potential(const Matrix& x_set, const AnchorSet& anchors, Gamma gamma) {
    if (!x_set.empty()) {
        check_dims(x_set.cols(), anchors.points.cols(), "normalized_potential: dimension");
    }
    return {profile_from(anchor_responses(x_set, anchors, gamma))};
}

double resemblance_loss(const Matrix& x_set, const AnchorSet& anchors, const Matrix& prototypes,
                        const Matrix& start_positions, Gamma gamma, double lambda) {
    if (prototypes.rows() != start_positions.rows() ||
        prototypes.cols() != start_positions.cols()) {
        throw DimensionMismatch("resemblance_loss: prototype and start shapes differ");
    }
    const std::vector<double> target = normalized_potential(x_set, anchors, gamma).values;
    const std::vector<double> current = normalized_potential(prototypes, anchors, gamma).values;

    double loss = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double diff = target[i] - current[i];
        loss += diff * diff;
    }
    if (lambda != 0.0) {
        for (std::size_t j = 0; j < prototypes.rows(); ++j) {
            loss += lambda * std::exp(-squared_distance(prototypes.row(j),
                                                        start_positions.row(j)) *
                                      gamma.inv_sq());
        }
    }
    return loss;
}

// With phi_ij = exp(-||P_j - A_i||^2 / g^2), Phi_i = sum_j phi_ij, S = sum_i Phi_i,
// Psi_i = Phi_i / S and e_i = Psi_i - Psi_i(X):
//
//   dL/dP_j = -4/(S g^2) * sum_i (e_i - c) * phi_ij * (P_j - A_i)
//             - 2 lambda / g^2 * exp(-||P_j - P0_j||^2 / g^2) * (P_j - P0_j)
//
// where c = sum_i e_i Psi_i collects the derivative of the shared denominator.
Matrix loss_gradient(const Matrix& x_set, const AnchorSet& anchors, const Matrix& prototypes,
                     const Matrix& start_positions, Gamma gamma, double lambda) {
    if (prototypes.rows() != start_positions.rows() ||
        prototypes.cols() != start_positions.cols()) {
        throw DimensionMismatch("loss_gradient: prototype and start shapes differ");
    }
    const std::vector<double> target = normalized_potential(x_set, anchors, gamma).values;
    const AnchorResponses resp = anchor_responses(prototypes, anchors, gamma);
    const std::vector<double> psi = profile_from(resp);

    const std::size_t k = anchors.points.rows();
    const std::size_t n = prototypes.rows();
    const std::size_t d = prototypes.cols();

    std::vector<double> error(k);
    double coupling = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        error[i] = psi[i] - target[i];
        coupling += error[i] * psi[i];
    }

    const double profile_scale = -4.0 * gamma.inv_sq() / resp.denom;
    const double reg_scale = -2.0 * lambda * gamma.inv_sq();

    Matrix grad(n, d, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto p = prototypes.row(j);
        auto g = grad.row(j);
        for (std::size_t i = 0; i < k; ++i) {
            const double w = profile_scale * (error[i] - coupling) * resp.phi(i, j);
            const auto anchor = anchors.points.row(i);
            for (std::size_t c = 0; c < d; ++c) g[c] += w * (p[c] - anchor[c]);
        }
        if (lambda != 0.0) {
            const auto p0 = start_positions.row(j);
            const double w =
                reg_scale * std::exp(-squared_distance(p, p0) * gamma.inv_sq());
            for (std::size_t c = 0; c < d; ++c) g[c] += w * (p[c] - p0[c]);
        }
    }
    return grad;
}

} // namespace pa
