#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "rmf/tolerance.hpp"
#include "rmf/vec.hpp"

namespace rmf {

/// A parametric curve in R^n: either analytic (a position evaluator plus
/// optional exact derivative evaluators for orders 1..3) or a strictly
/// increasing list of (s, point) samples. Immutable after construction.
class Curve {
public:
    using Fn = std::function<Vec(double)>;

    /// Empty curve; only useful as a placeholder (e.g. a frame field read
    /// back from JSON has no base curve).
    Curve() = default;

    static Curve analytic(int dim, double s_min, double s_max, Fn position,
                          std::array<Fn, 3> derivatives = {});
    static Curve sampled(std::vector<double> params, std::vector<Vec> points);

    bool valid() const { return dim_ > 0; }
    int dim() const { return dim_; }
    double s_min() const { return s_min_; }
    double s_max() const { return s_max_; }
    bool is_sampled() const { return sampled_; }
    bool has_derivative(int order) const {
        return !sampled_ && order >= 1 && order <= 3 && static_cast<bool>(derivatives_[order - 1]);
    }

    /// Position at s; sampled curves interpolate linearly between samples.
    Vec position(double s) const;

    const std::vector<double>& params() const;
    const std::vector<Vec>& points() const;

    /// Exact derivative evaluator (analytic curves that supplied one).
    Vec exact_derivative(double s, int order) const;

private:
    int dim_ = 0;
    bool sampled_ = false;
    double s_min_ = 0.0, s_max_ = 0.0;
    Fn position_;
    std::array<Fn, 3> derivatives_{};
    std::vector<double> params_;
    std::vector<Vec> points_;
};

/// d^order/ds^order of the curve at s (order 1..3). Uses the supplied exact
/// evaluator when present; otherwise 2nd-order central differences with the
/// per-order step from cfg. Sampled curves use 2nd-order non-uniform stencils
/// over their own grid (one-sided at the ends) and interpolate between
/// samples.
Vec derivative(const Curve& curve, double s, int order, const ToleranceConfig& cfg = {});

/// Derivative estimates of a sampled curve at each of its own samples.
std::vector<Vec> derivative_samples(const Curve& curve, int order);

/// One finite-difference pass over an arbitrary sample sequence.
std::vector<Vec> differentiate_samples(const std::vector<double>& s, const std::vector<Vec>& f);

/// Resample onto uniform cumulative arclength (composite trapezoid quadrature
/// of speed over a 4x-dense probe grid, inverted by monotone interpolation).
/// The output parameter starts at 0 and the output is unit speed up to the
/// quadrature error.
Curve arclength_reparam(const Curve& curve, int n_samples, const ToleranceConfig& cfg = {});

// Builtin curves; every worked example and test runs without external data.
Curve line_curve(int dim = 3, double length = 10.0);
Curve circle_curve(double radius = 1.0, int dim = 3);
Curve great_circle_curve(double radius = 1.0);
Curve helix_curve();  // (24 cos(s/25), 24 sin(s/25), 7s/25), unit speed
Curve twisted_cubic_curve();

/// Lookup by CLI name, e.g. "circle", "circle:2.5", "great-circle:3", "helix".
Curve builtin_curve(const std::string& name, int dim = 3);

}  // namespace rmf
