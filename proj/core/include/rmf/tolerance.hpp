#pragma once

#include "rmf/errors.hpp"

namespace rmf {

// Numerical knobs shared across the library. All fields must stay strictly
// positive; validate() is called by the entry points that consume them.
//
// Finite-difference steps are per derivative order. The defaults sit near the
// double-precision optimum for curves with coordinates up to O(10): the
// higher-order stencils divide by h^2 and h^3, so steps much below ~1e-3
// drown the result in rounding noise.
struct ToleranceConfig {
    double fd_step = 1e-5;    // order-1 central differences
    double fd_step2 = 2e-3;   // order-2 stencil
    double fd_step3 = 2e-2;   // order-3 stencil
    double ortho_tol = 1e-9;  // orthonormality drift allowed in a Frame
    double residual_tol = 1e-6;
    double singular_guard = 1e-8;  // minimum |k_j| before divisions give up

    double step_for_order(int order) const {
        return order <= 1 ? fd_step : (order == 2 ? fd_step2 : fd_step3);
    }
};

inline void validate(const ToleranceConfig& cfg) {
    if (!(cfg.fd_step > 0.0) || !(cfg.fd_step2 > 0.0) || !(cfg.fd_step3 > 0.0) ||
        !(cfg.ortho_tol > 0.0) || !(cfg.residual_tol > 0.0) || !(cfg.singular_guard > 0.0)) {
        throw UsageError("ToleranceConfig: all fields must be strictly positive");
    }
}

}  // namespace rmf
