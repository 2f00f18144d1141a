#pragma once

#include <utility>
#include <vector>

#include "rmf/curve.hpp"

namespace rmf {

/// An orthonormal frame {xi_1,...,xi_n} at parameter s. Vectors are the
/// columns of `m`; xi_1 is the tangent slot.
struct Frame {
    double s = 0.0;
    Eigen::MatrixXd m;

    int dim() const { return static_cast<int>(m.rows()); }
    Vec xi(int i) const { return m.col(i - 1); }  // 1-based, matching xi_1..xi_n

    /// max |<xi_i, xi_j> - delta_ij|
    double orthonormality_error() const;
    double determinant() const { return m.determinant(); }
};

/// Frames at strictly increasing parameters along a base curve.
struct FrameField {
    std::vector<Frame> frames;
    Curve base;

    std::size_t size() const { return frames.size(); }
    int dim() const { return frames.empty() ? 0 : frames.front().dim(); }
    std::vector<double> grid() const;
};

/// Per-sample RM curvatures k_1..k_{n-1}; optional Frenet kappa/tau and the
/// normal-plane rotation angle theta = integral of tau (n = 3 only).
struct CurvatureField {
    std::vector<double> s;
    std::vector<Vec> k;
    std::vector<double> kappa, tau, theta;
    std::vector<double> residual;  // ||xi_1' - sum k_j xi_{j+1}|| where produced from a field

    std::size_t size() const { return s.size(); }
    int normals() const { return k.empty() ? 0 : static_cast<int>(k.front().size()); }
    bool has_frenet() const { return !kappa.empty(); }
    Vec k_at(double x) const;  // linear interpolation between samples
};

/// Frenet frame at s via Gram-Schmidt of (alpha', alpha'', ...), last vector
/// completing the orientation to determinant +1. Supported for dim 2..4;
/// higher dimensions use the RMF constructions instead.
Frame frenet_frame(const Curve& curve, double s, const ToleranceConfig& cfg = {});

/// Curvature and torsion of a 3D curve at s (any regular parameterization).
std::pair<double, double> frenet_kappa_tau(const Curve& curve, double s, const ToleranceConfig& cfg = {});

/// Deterministic default initial frame: xi_1 = unit tangent at s0, the rest
/// by Gram-Schmidt over ambient basis vectors starting from the one least
/// parallel to xi_1, orientation fixed to +1.
Frame default_initial_frame(const Curve& curve, double s0, const ToleranceConfig& cfg = {});

/// Rotation minimizing frame by the double reflection method: each step
/// reflects in the bisecting plane of consecutive points, then in the
/// bisecting plane of the reflected and true next tangents. Tangents come
/// from the curve; frames are re-orthonormalized every step.
FrameField rmf_double_reflection(const Curve& curve, const std::vector<double>& s_grid, const Frame& initial,
                                 const ToleranceConfig& cfg = {});

/// Rotation minimizing frame by integrating the skew frame system
///   xi_1' = sum_j k_j xi_{j+1},   xi_{j+1}' = -k_j xi_1
/// with classical 4th-order steps on the curvature grid (curvatures
/// interpolate linearly at half-steps) and per-step re-orthonormalization.
/// The base curve is the cumulative integral of xi_1.
FrameField rmf_ode(const CurvatureField& curvatures, const Frame& initial, const ToleranceConfig& cfg = {});

/// RM curvatures k_j = <xi_1', xi_{j+1}> recovered from a frame field, with
/// xi_1' by finite differences along the field; fills `residual`.
CurvatureField rm_curvatures(const FrameField& field, const ToleranceConfig& cfg = {});

/// The Frenet frame of a 3D curve reordered as the RM frame {N, B, T} along
/// the integral curve of N, with k_1 = tau and k_2 = -kappa; also returns
/// kappa/tau/theta per sample.
std::pair<FrameField, CurvatureField> frenet_as_rmf(const Curve& curve, const std::vector<double>& s_grid,
                                                    const ToleranceConfig& cfg = {});

/// Uniform grid helper.
std::vector<double> uniform_grid(double lo, double hi, int n);

/// Unit tangent of the curve at s.
Vec unit_tangent(const Curve& curve, double s, const ToleranceConfig& cfg = {});

/// Modified Gram-Schmidt re-orthonormalization, preserving the orientation.
void reorthonormalize(Eigen::MatrixXd& m);

}  // namespace rmf
