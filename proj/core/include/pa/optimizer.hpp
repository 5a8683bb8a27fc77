#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "pa/dataset.hpp"
#include "pa/matrix.hpp"
#include "pa/potential.hpp"

namespace pa {

/// Adam moment estimates. step_count increments by exactly one per step.
struct AdamState {
    Matrix first_moment;
    Matrix second_moment;
    std::uint64_t step_count = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState for_shape(std::size_t rows, std::size_t cols) {
        AdamState s;
        s.first_moment = Matrix(rows, cols, 0.0);
        s.second_moment = Matrix(rows, cols, 0.0);
        return s;
    }
};

/// One bias-corrected Adam update. Throws NonFiniteGradient if the gradient
/// contains NaN or Inf.
std::pair<AdamState, Matrix> adam_step(AdamState state, Matrix params, const Matrix& grad,
                                       double lr);

/// Prototype positions under optimization plus their frozen starting
/// positions (the regularization reference).
struct PrototypeSet {
    Matrix current;
    Matrix start;
    ClassTag class_tag = ClassTag::minority;
};

/// Called with (iteration, loss); iteration 0 reports the initial loss and
/// the final call reports the loss after the last step.
using LossTraceFn = std::function<void(std::size_t iteration, double loss)>;

/// Runs exactly `iterations` full-batch Adam steps of resemblance_loss over
/// protos.current. Start positions are never touched. An empty prototype set
/// is returned unchanged. Errors raised mid-run carry the iteration index.
PrototypeSet optimize_prototypes(const Matrix& x_class, const AnchorSet& anchors,
                                 PrototypeSet protos, Gamma gamma, double lambda,
                                 std::size_t iterations, double lr,
                                 const LossTraceFn& trace = nullptr);

} // namespace pa
