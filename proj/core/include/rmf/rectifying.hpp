#pragma once

#include "rmf/frame.hpp"

namespace rmf {

/// A rectifying-type construction psi(s) = sum_i coeff_i(s) * xi_{i+1}(s):
/// coefficient slot `type_index` (1-based, in 1..n-1) is a function of s, the
/// remaining n-2 slots are the fixed `constants` in increasing slot order.
struct RectifyingSpec {
    int n = 3;
    int type_index = 1;
    std::vector<double> constants;
    std::vector<double> free_coeff;  // filled by derive_free_coefficient

    bool derived() const { return !free_coeff.empty(); }
    /// Coefficients (c_1..c_{n-1}) at sample index i.
    Vec coefficients(std::size_t i) const;
    void check_shape() const;
};

/// Solves sum_i coeff_i * k_i = 0 for the free slot:
///   free(s) = -(sum_{i != j} a_i k_i(s)) / k_j(s),
/// the unique function annihilating the xi_1 component of psi'. Rejects grids
/// where k_j dips below singular_guard or changes sign between samples.
RectifyingSpec derive_free_coefficient(const CurvatureField& curvatures, RectifyingSpec spec,
                                       const ToleranceConfig& cfg = {});

/// psi(s) on the field grid as a sampled curve.
Curve construct_type_curve(const FrameField& field, const RectifyingSpec& spec);

/// Finite-difference check that psi' stays parallel to xi_{type_index+1}.
struct DerivativeResidualReport {
    double max_xi1 = 0.0;    // max |<psi', xi_1>|
    double max_fixed = 0.0;  // max over fixed slots of |<psi', xi_{i+1}>|
    std::vector<double> xi1_per_sample;
};
DerivativeResidualReport verify_derivative_rectifying(const FrameField& field, const RectifyingSpec& spec,
                                                      const ToleranceConfig& cfg = {});

/// The constant vector U = sum coeff_i xi_{i+1} (requires the derived free
/// coefficient to be constant) plus the constancy of <xi_{i+1}, U_hat> along
/// each integral curve of a normal vector.
struct AxisReport {
    Vec axis;       // U at the first sample
    Vec axis_unit;  // U / |U|
    double constancy_residual = 0.0;              // max_s |U(s) - U(s_min)|
    std::vector<double> angle_mean;               // mean <xi_{i+1}, U_hat>, i = 1..n-1
    std::vector<double> angle_residual;           // max deviation from that mean
    double free_coeff_value = 0.0;                // the constant value used
    double coeff_spread = 0.0;                    // relative spread of the derived coefficient
};
AxisReport helix_axis(const FrameField& field, const CurvatureField& curvatures, const RectifyingSpec& spec,
                      const ToleranceConfig& cfg = {});

/// Factor a sampled curve as scale(s) * Y(s) with |Y| = 1, and compare the
/// scale profile against c*sec(omega*s + phi) (affine reparameterization fit).
struct SecProfileFit {
    bool constant_norm = false;  // scale is constant; no sec profile to fit
    double omega = 0.0;
    double phase = 0.0;
    double misfit = 0.0;  // max |scale - |c| sec(omega s + phi)|
};
struct SphericalFactor {
    std::vector<double> s;
    std::vector<double> scale;
    std::vector<Vec> y;
    int sphere_dim = 0;
    double max_unit_residual = 0.0;  // max | |Y| - 1 |
    SecProfileFit fit;
};
SphericalFactor spherical_factorization(const Curve& psi, double c, const ToleranceConfig& cfg = {});

/// Least-squares sphere fit (linear Coope form on centered data, minimum-norm
/// solve) plus the constant normal-plane projections a_i and the affine
/// curvature relation sum a_i k_i + 1 = 0.
struct SphericalCoefficients {
    Vec center;
    double r_fit = 0.0;                  // mean distance to the fitted center
    double distance_residual = 0.0;      // max | |alpha - center| - r_fit | / r_fit
    std::vector<double> a;               // mean projections <alpha - center, xi_{i+1}>
    double r_from_a = 0.0;               // sqrt(sum a_i^2)
    double constancy_residual = 0.0;     // max |proj_i(s) - a_i|
    double relation_residual = 0.0;      // max |sum a_i k_i(s) + 1|
    bool underdetermined_center = false; // rank-deficient fit (plane-centered pick)
};
SphericalCoefficients spherical_coefficients(const Curve& alpha, const FrameField& field,
                                             const CurvatureField& curvatures, const ToleranceConfig& cfg = {});

}  // namespace rmf
