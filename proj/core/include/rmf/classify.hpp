#pragma once

#include <map>
#include <optional>
#include <string>

#include "rmf/rectifying.hpp"

namespace rmf {

enum class Verdict { yes, no, indeterminate };

const char* to_string(Verdict v);

/// yes below residual_tol, indeterminate below 1000x of it, no above.
Verdict verdict_from_residual(double residual, double residual_tol);

struct ReportEntry {
    Verdict verdict = Verdict::no;
    double residual = 0.0;
    std::vector<double> params;
    bool degenerate = false;
    std::string note;
};

struct ClassificationReport {
    std::map<std::string, ReportEntry> entries;
};

/// tau/kappa against arclength: yes iff the least-squares line fits and has a
/// nonzero slope (constant ratios are excluded). params = {slope, intercept}.
ReportEntry is_rectifying_chen(const Curve& curve, const ToleranceConfig& cfg = {}, int n_samples = 2048);

/// Position-vector test: residual = max |<beta, N_beta>| / |beta|.
ReportEntry is_rectifying_position(const Curve& curve, const ToleranceConfig& cfg = {}, int n_samples = 2048);

/// Frenet-type frame decomposition test on prepared sample sequences:
/// d/ds <r, xi_1> = a_1 and d/ds <r, xi_3> = a_3.
struct MyllerSamples {
    std::vector<double> s;
    std::vector<double> a1, a2, a3;      // components of dr/ds in the frame
    std::vector<double> r_xi1, r_xi3;    // <r, xi_1>, <r, xi_3>
};
ReportEntry is_rectifying_type_myller(const MyllerSamples& samples, const ToleranceConfig& cfg = {});

/// Fixed-axis test: the axis maximizing constancy of <T, U> is the minor
/// eigenvector of the tangent covariance; residual is the standard deviation
/// of <T, U>. params = {u_1..u_n, mean angle cosine}.
ReportEntry is_helix(const Curve& curve, const ToleranceConfig& cfg = {}, int n_samples = 2048);

/// Sphere test via spherical_coefficients: distance constancy and the affine
/// curvature relation must both hold. params = {center_1..center_n, r, a_1..a_{n-1}}.
ReportEntry is_spherical(const Curve& curve, const FrameField& field, const CurvatureField& curvatures,
                         const ToleranceConfig& cfg = {});

/// Affine relation a k_1 + b k_2 + 1 = 0 on Frenet data (k_1 = tau,
/// k_2 = -kappa); minimum-norm least squares when underdetermined.
/// params = {a, b}.
ReportEntry is_bertrand(const CurvatureField& curvatures, const ToleranceConfig& cfg = {});

/// Runs every classifier applicable to the curve's dimension.
ClassificationReport classify_all(const Curve& curve, const ToleranceConfig& cfg = {}, int n_samples = 8192);

}  // namespace rmf
