#include "pa/optimizer.hpp"

#include <cmath>
#include <string>

#include "pa/errors.hpp"

namespace pa {

std::pair<AdamState, Matrix> adam_step(AdamState state, Matrix params, const Matrix& grad,
                                       double lr) {
    if (params.rows() != grad.rows() || params.cols() != grad.cols()) {
        throw DimensionMismatch("adam_step: parameter and gradient shapes differ");
    }
    if (!(lr > 0.0)) {
        throw Error("adam_step: learning rate must be positive");
    }
    for (double g : grad.data()) {
        if (!std::isfinite(g)) {
            throw NonFiniteGradient("adam_step: gradient contains NaN or Inf");
        }
    }

    ++state.step_count;
    const double t = static_cast<double>(state.step_count);
    const double bias1 = 1.0 - std::pow(state.beta1, t);
    const double bias2 = 1.0 - std::pow(state.beta2, t);

    auto& m = state.first_moment.data();
    auto& v = state.second_moment.data();
    auto& p = params.data();
    const auto& g = grad.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
        m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
        v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
        const double m_hat = m[i] / bias1;
        const double v_hat = v[i] / bias2;
        p[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
    return {std::move(state), std::move(params)};
}

PrototypeSet optimize_prototypes(const Matrix& x_class, const AnchorSet& anchors,
                                 PrototypeSet protos, Gamma gamma, double lambda,
                                 std::size_t iterations, double lr, const LossTraceFn& trace) {
    if (protos.current.empty()) return protos; // nothing to place

    AdamState state = AdamState::for_shape(protos.current.rows(), protos.current.cols());
    for (std::size_t iter = 0; iter < iterations; ++iter) {
        try {
            if (trace) {
                trace(iter, resemblance_loss(x_class, anchors, protos.current, protos.start,
                                             gamma, lambda));
            }
            const Matrix grad =
                loss_gradient(x_class, anchors, protos.current, protos.start, gamma, lambda);
            auto [next_state, next_params] =
                adam_step(std::move(state), std::move(protos.current), grad, lr);
            state = std::move(next_state);
            protos.current = std::move(next_params);
        } catch (const NonFiniteGradient& e) {
            throw NonFiniteGradient(std::string(e.what()) + " (iteration " +
                                    std::to_string(iter) + ")");
        } catch (const DegeneratePotential& e) {
            throw DegeneratePotential(std::string(e.what()) + " (iteration " +
                                      std::to_string(iter) + ")");
        }
    }
    if (trace) {
        trace(iterations,
              resemblance_loss(x_class, anchors, protos.current, protos.start, gamma, lambda));
    }
    return protos;
}

} // namespace pa
