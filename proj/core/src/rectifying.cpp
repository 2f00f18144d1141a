#include "rmf/rectifying.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rmf/numfmt.hpp"

namespace rmf {

void RectifyingSpec::check_shape() const {
    if (n < 3) throw UsageError("RectifyingSpec: n must be >= 3");
    if (type_index < 1 || type_index > n - 1) {
        throw UsageError("RectifyingSpec: type_index must lie in 1.." + std::to_string(n - 1));
    }
    if (static_cast<int>(constants.size()) != n - 2) {
        throw UsageError("RectifyingSpec: expected " + std::to_string(n - 2) + " constants, got " +
                         std::to_string(constants.size()));
    }
}

Vec RectifyingSpec::coefficients(std::size_t i) const {
    Vec c(n - 1);
    int fixed = 0;
    for (int slot = 1; slot <= n - 1; ++slot) {
        c[slot - 1] = (slot == type_index) ? free_coeff.at(i) : constants[fixed++];
    }
    return c;
}

RectifyingSpec derive_free_coefficient(const CurvatureField& curvatures, RectifyingSpec spec,
                                       const ToleranceConfig& cfg) {
    validate(cfg);
    spec.check_shape();
    if (curvatures.normals() != spec.n - 1) throw DimensionError(curvatures.normals(), spec.n - 1);

    const std::size_t m = curvatures.size();
    const int j = spec.type_index;

    std::vector<double> offending;
    for (std::size_t i = 0; i < m; ++i) {
        const double kj = curvatures.k[i][j - 1];
        if (std::abs(kj) <= cfg.singular_guard) offending.push_back(curvatures.s[i]);
        if (i > 0 && curvatures.k[i][j - 1] * curvatures.k[i - 1][j - 1] < 0.0) {
            // Zero crossing between samples: the ratio blows up inside the grid.
            offending.push_back(0.5 * (curvatures.s[i - 1] + curvatures.s[i]));
        }
    }
    if (!offending.empty()) {
        std::string msg = "derive_free_coefficient: k_" + std::to_string(j) + " vanishes near s =";
        const std::size_t shown = std::min<std::size_t>(offending.size(), 4);
        for (std::size_t i = 0; i < shown; ++i) msg += " " + format_real(offending[i]);
        if (offending.size() > shown) msg += " ... (" + std::to_string(offending.size()) + " points)";
        throw SingularityError(msg, offending);
    }

    spec.free_coeff.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        double num = 0.0;
        int fixed = 0;
        for (int slot = 1; slot <= spec.n - 1; ++slot) {
            if (slot == j) continue;
            num += spec.constants[fixed++] * curvatures.k[i][slot - 1];
        }
        spec.free_coeff[i] = -num / curvatures.k[i][j - 1];
    }
    return spec;
}

Curve construct_type_curve(const FrameField& field, const RectifyingSpec& spec) {
    spec.check_shape();
    if (!spec.derived()) throw UsageError("construct_type_curve: free coefficient not set");
    if (spec.free_coeff.size() != field.size()) {
        throw GridMismatchError("construct_type_curve: coefficient grid (" + std::to_string(spec.free_coeff.size()) +
                                ") does not match the frame grid (" + std::to_string(field.size()) + ")");
    }
    if (field.dim() != spec.n) throw DimensionError(field.dim(), spec.n);

    std::vector<double> s = field.grid();
    std::vector<Vec> pts(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        const Vec c = spec.coefficients(i);
        Vec p = Vec::Zero(spec.n);
        for (int slot = 1; slot <= spec.n - 1; ++slot) p += c[slot - 1] * field.frames[i].xi(slot + 1);
        pts[i] = std::move(p);
    }
    return Curve::sampled(std::move(s), std::move(pts));
}

DerivativeResidualReport verify_derivative_rectifying(const FrameField& field, const RectifyingSpec& spec,
                                                      const ToleranceConfig& cfg) {
    validate(cfg);
    Curve psi = construct_type_curve(field, spec);
    std::vector<Vec> dpsi = differentiate_samples(psi.params(), psi.points());

    DerivativeResidualReport rep;
    rep.xi1_per_sample.resize(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double r1 = std::abs(inner(dpsi[i], field.frames[i].xi(1)));
        rep.xi1_per_sample[i] = r1;
        rep.max_xi1 = std::max(rep.max_xi1, r1);
        for (int slot = 1; slot <= spec.n - 1; ++slot) {
            if (slot == spec.type_index) continue;
            rep.max_fixed = std::max(rep.max_fixed, std::abs(inner(dpsi[i], field.frames[i].xi(slot + 1))));
        }
    }
    return rep;
}

namespace {

// Relative spread used for the three-way constancy verdicts.
double relative_stddev(const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    return std::sqrt(var) / std::max(1.0, std::abs(mean));
}

}  // namespace

AxisReport helix_axis(const FrameField& field, const CurvatureField& curvatures, const RectifyingSpec& spec,
                      const ToleranceConfig& cfg) {
    validate(cfg);
    if (!spec.derived()) throw UsageError("helix_axis: free coefficient not set");
    if (spec.free_coeff.size() != field.size()) throw GridMismatchError("helix_axis: grid mismatch");
    (void)curvatures;

    const double spread = relative_stddev(spec.free_coeff);
    if (spread >= 1e-3) {
        throw NotConstantError("helix_axis: derived coefficient is not constant (relative spread " +
                                   format_real(spread) + ")",
                               spread);
    }

    AxisReport rep;
    rep.coeff_spread = spread;
    const std::size_t m = field.size();
    const int n = field.dim();
    const double mean_coeff =
        std::accumulate(spec.free_coeff.begin(), spec.free_coeff.end(), 0.0) / static_cast<double>(m);
    rep.free_coeff_value = mean_coeff;

    RectifyingSpec constant_spec = spec;
    std::fill(constant_spec.free_coeff.begin(), constant_spec.free_coeff.end(), mean_coeff);

    std::vector<Vec> u(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec c = constant_spec.coefficients(i);
        Vec p = Vec::Zero(n);
        for (int slot = 1; slot <= n - 1; ++slot) p += c[slot - 1] * field.frames[i].xi(slot + 1);
        u[i] = std::move(p);
    }
    rep.axis = u.front();
    const double axis_norm = norm(rep.axis);
    if (!(axis_norm > cfg.singular_guard)) throw ZeroVectorError("helix_axis: U vanishes");
    rep.axis_unit = rep.axis / axis_norm;
    for (std::size_t i = 0; i < m; ++i) rep.constancy_residual = std::max(rep.constancy_residual, norm(u[i] - u[0]));

    rep.angle_mean.resize(n - 1);
    rep.angle_residual.resize(n - 1);
    for (int slot = 1; slot <= n - 1; ++slot) {
        double mean = 0.0;
        for (std::size_t i = 0; i < m; ++i) mean += inner(field.frames[i].xi(slot + 1), rep.axis_unit);
        mean /= static_cast<double>(m);
        double dev = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            dev = std::max(dev, std::abs(inner(field.frames[i].xi(slot + 1), rep.axis_unit) - mean));
        }
        rep.angle_mean[slot - 1] = mean;
        rep.angle_residual[slot - 1] = dev;
    }
    return rep;
}

SphericalFactor spherical_factorization(const Curve& psi, double c, const ToleranceConfig& cfg) {
    validate(cfg);
    if (c == 0.0) throw UsageError("spherical_factorization: c must be nonzero");
    if (!psi.is_sampled()) throw UsageError("spherical_factorization: expects a sampled curve");

    SphericalFactor out;
    out.s = psi.params();
    out.sphere_dim = psi.dim() - 1;
    const std::size_t m = out.s.size();
    out.scale.resize(m);
    out.y.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec& p = psi.points()[i];
        const double r = norm(p);
        if (!(r > cfg.singular_guard)) {
            throw ZeroVectorError("spherical_factorization: psi vanishes at s = " + format_real(out.s[i]));
        }
        out.scale[i] = r;
        out.y[i] = p / r;
        out.max_unit_residual = std::max(out.max_unit_residual, std::abs(norm(out.y[i]) - 1.0));
    }

    const double cmag = std::abs(c);
    double smin = *std::min_element(out.scale.begin(), out.scale.end());
    double smax = *std::max_element(out.scale.begin(), out.scale.end());
    if ((smax - smin) / std::max(1.0, smax) < 1e-9) {
        // Constant |psi|: a helix-axis style curve, not a sec profile.
        out.fit.constant_norm = true;
        out.fit.misfit = smax - smin;
        return out;
    }

    // scale = |c| sec(theta) with theta = omega*s + phi affine. Recover
    // theta up to sign from sec, orient by the scale minimum, and fit the
    // line by least squares.
    std::size_t imin =
        static_cast<std::size_t>(std::min_element(out.scale.begin(), out.scale.end()) - out.scale.begin());
    std::vector<double> theta(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double w = std::max(out.scale[i] / cmag, 1.0);
        const double mag = std::atan(std::sqrt(w * w - 1.0));
        theta[i] = (out.s[i] >= out.s[imin]) ? mag : -mag;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += out.s[i];
        sy += theta[i];
        sxx += out.s[i] * out.s[i];
        sxy += out.s[i] * theta[i];
    }
    const double dm = static_cast<double>(m);
    const double denom = dm * sxx - sx * sx;
    out.fit.omega = (dm * sxy - sx * sy) / denom;
    out.fit.phase = (sy - out.fit.omega * sx) / dm;
    for (std::size_t i = 0; i < m; ++i) {
        const double model = cmag / std::cos(out.fit.omega * out.s[i] + out.fit.phase);
        out.fit.misfit = std::max(out.fit.misfit, std::abs(out.scale[i] - model));
    }
    return out;
}

SphericalCoefficients spherical_coefficients(const Curve& alpha, const FrameField& field,
                                             const CurvatureField& curvatures, const ToleranceConfig& cfg) {
    validate(cfg);
    const std::size_t m = field.size();
    if (m < 4) throw InsufficientDataError("spherical_coefficients: need at least 4 samples");
    if (curvatures.size() != m) throw GridMismatchError("spherical_coefficients: curvature/frame grid mismatch");
    const int n = field.dim();

    std::vector<double> grid = field.grid();
    std::vector<Vec> pts(m);
    for (std::size_t i = 0; i < m; ++i) pts[i] = alpha.position(grid[i]);

    // Coope fit on centered data: rows [2 p^T, 1] (c; r^2-|c|^2) = |p|^2.
    // Minimum-norm solve makes the rank-deficient cases (circles) pick the
    // plane-centered sphere.
    Vec centroid = Vec::Zero(n);
    for (const Vec& p : pts) centroid += p;
    centroid /= static_cast<double>(m);

    Eigen::MatrixXd design(m, n + 1);
    Eigen::VectorXd b(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec q = pts[i] - centroid;
        design.block(i, 0, 1, n) = 2.0 * q.transpose();
        design(i, n) = 1.0;
        b[i] = q.squaredNorm();
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-9);
    if (svd.rank() < 2) throw FitDegeneracyError("spherical_coefficients: degenerate sphere fit");
    Eigen::VectorXd sol = svd.solve(b);

    SphericalCoefficients out;
    out.underdetermined_center = svd.rank() < n + 1;
    out.center = sol.head(n) + centroid;

    double mean_dist = 0.0;
    for (const Vec& p : pts) mean_dist += norm(p - out.center);
    mean_dist /= static_cast<double>(m);
    if (!(mean_dist > cfg.singular_guard)) throw FitDegeneracyError("spherical_coefficients: zero-radius fit");
    out.r_fit = mean_dist;
    for (const Vec& p : pts) {
        out.distance_residual = std::max(out.distance_residual, std::abs(norm(p - out.center) - mean_dist) / mean_dist);
    }

    // Projections onto the frame normals; spherical curves keep them constant.
    out.a.assign(n - 1, 0.0);
    std::vector<std::vector<double>> proj(n - 1, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
        const Vec rel = pts[i] - out.center;
        for (int slot = 1; slot <= n - 1; ++slot) {
            proj[slot - 1][i] = inner(rel, field.frames[i].xi(slot + 1));
        }
    }
    for (int j = 0; j < n - 1; ++j) {
        out.a[j] = std::accumulate(proj[j].begin(), proj[j].end(), 0.0) / static_cast<double>(m);
        for (double v : proj[j]) out.constancy_residual = std::max(out.constancy_residual, std::abs(v - out.a[j]));
        out.r_from_a += out.a[j] * out.a[j];
    }
    out.r_from_a = std::sqrt(out.r_from_a);

    // The affine relation sum a_i k_i + 1 = 0 holds for arclength curvatures;
    // rescale by the speed when the field parameter is not arclength.
    std::vector<double> speed(m, 1.0);
    if (alpha.is_sampled()) {
        std::vector<Vec> d1 = derivative_samples(alpha, 1);
        const std::vector<double>& sp = alpha.params();
        for (std::size_t i = 0; i < m; ++i) {
            auto it = std::upper_bound(sp.begin(), sp.end(), grid[i]);
            std::size_t j = static_cast<std::size_t>(it - sp.begin());
            if (j > 0) --j;
            if (j + 1 >= sp.size()) j = sp.size() - 2;
            const double t = (grid[i] - sp[j]) / (sp[j + 1] - sp[j]);
            speed[i] = norm((1.0 - t) * d1[j] + t * d1[j + 1]);
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) speed[i] = norm(derivative(alpha, grid[i], 1, cfg));
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (!(speed[i] > cfg.singular_guard)) throw SingularityError("spherical_coefficients: vanishing speed", {grid[i]});
        double rel = 1.0;
        for (int j = 0; j < n - 1; ++j) rel += out.a[j] * curvatures.k[i][j] / speed[i];
        out.relation_residual = std::max(out.relation_residual, std::abs(rel));
    }
    return out;
}

}  // namespace rmf
