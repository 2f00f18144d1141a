#include "rmf/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rmf/numfmt.hpp"

namespace rmf {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        default: return "indeterminate";
    }
}

Verdict verdict_from_residual(double residual, double residual_tol) {
    if (residual < residual_tol) return Verdict::yes;
    if (residual < 1e3 * residual_tol) return Verdict::indeterminate;
    return Verdict::no;
}

namespace {

constexpr double kSlopeTol = 1e-6;  // nonconstancy threshold for the Chen test

// Sample grid for a classifier: a sampled curve is classified on its own
// samples; an analytic one on a uniform grid, shrunk by the widest stencil
// when derivatives have to come from finite differences.
std::vector<double> classification_grid(const Curve& curve, const ToleranceConfig& cfg, int n_samples) {
    if (curve.is_sampled()) return curve.params();
    double lo = curve.s_min(), hi = curve.s_max();
    if (!curve.has_derivative(1) || !curve.has_derivative(2) || !curve.has_derivative(3)) {
        const double margin = 2.0 * cfg.fd_step3 * 1.01;
        lo += margin;
        hi -= margin;
        if (!(lo < hi)) throw DomainError("classification grid: domain too small for the stencil margin");
    }
    return uniform_grid(lo, hi, n_samples);
}

struct KappaTauSamples {
    std::vector<double> s, kappa, tau;
};

KappaTauSamples kappa_tau_samples(const Curve& curve, const ToleranceConfig& cfg, int n_samples) {
    if (curve.dim() != 3) throw UsageError("kappa/tau sampling: defined for dim 3");
    KappaTauSamples out;
    out.s = classification_grid(curve, cfg, n_samples);
    std::size_t m = out.s.size();
    out.kappa.resize(m);
    out.tau.resize(m);

    if (curve.is_sampled()) {
        std::vector<Vec> d1 = derivative_samples(curve, 1);
        std::vector<Vec> d2 = differentiate_samples(out.s, d1);
        std::vector<Vec> d3 = differentiate_samples(out.s, d2);
        // Repeated one-sided stencils stack up at the ends; classify on the
        // interior samples.
        if (m > 12) {
            out.s = std::vector<double>(out.s.begin() + 3, out.s.end() - 3);
            d1 = std::vector<Vec>(d1.begin() + 3, d1.end() - 3);
            d2 = std::vector<Vec>(d2.begin() + 3, d2.end() - 3);
            d3 = std::vector<Vec>(d3.begin() + 3, d3.end() - 3);
            m = out.s.size();
            out.kappa.resize(m);
            out.tau.resize(m);
        }
        for (std::size_t i = 0; i < m; ++i) {
            Eigen::Vector3d a(d1[i][0], d1[i][1], d1[i][2]);
            Eigen::Vector3d b(d2[i][0], d2[i][1], d2[i][2]);
            Eigen::Vector3d c(d3[i][0], d3[i][1], d3[i][2]);
            const double speed = a.norm();
            if (!(speed > cfg.singular_guard)) throw SingularityError("kappa/tau: vanishing speed", {out.s[i]});
            Eigen::Vector3d cross = a.cross(b);
            const double cn = cross.norm();
            if (!(cn > cfg.singular_guard)) {
                throw DegeneracyError("kappa/tau: vanishing curvature at s = " + format_real(out.s[i]), cn * cn);
            }
            out.kappa[i] = cn / (speed * speed * speed);
            out.tau[i] = cross.dot(c) / (cn * cn);
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            auto [kappa, tau] = frenet_kappa_tau(curve, out.s[i], cfg);
            out.kappa[i] = kappa;
            out.tau[i] = tau;
        }
    }
    return out;
}

std::vector<Vec> tangent_samples(const Curve& curve, const std::vector<double>& grid, const ToleranceConfig& cfg) {
    std::vector<Vec> t(grid.size());
    if (curve.is_sampled()) {
        std::vector<Vec> d1 = derivative_samples(curve, 1);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double v = norm(d1[i]);
            if (!(v > cfg.singular_guard)) throw SingularityError("tangent: vanishing speed", {grid[i]});
            t[i] = d1[i] / v;
        }
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i) t[i] = unit_tangent(curve, grid[i], cfg);
    }
    return t;
}

}  // namespace

ReportEntry is_rectifying_chen(const Curve& curve, const ToleranceConfig& cfg, int n_samples) {
    validate(cfg);
    KappaTauSamples kt = kappa_tau_samples(curve, cfg, n_samples);
    const std::size_t m = kt.s.size();

    std::vector<double> ratio(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(kt.kappa[i] > cfg.singular_guard)) {
            throw DegeneracyError("is_rectifying_chen: kappa vanishes at s = " + format_real(kt.s[i]), kt.kappa[i]);
        }
        ratio[i] = kt.tau[i] / kt.kappa[i];
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += kt.s[i];
        sy += ratio[i];
        sxx += kt.s[i] * kt.s[i];
        sxy += kt.s[i] * ratio[i];
    }
    const double dm = static_cast<double>(m);
    const double slope = (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / dm;

    double residual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        residual = std::max(residual, std::abs(ratio[i] - (slope * kt.s[i] + intercept)));
    }

    ReportEntry entry;
    entry.params = {slope, intercept};
    entry.residual = residual;
    if (std::abs(slope) <= kSlopeTol) {
        entry.verdict = Verdict::no;
        entry.note = "tau/kappa is constant";
    } else {
        entry.verdict = verdict_from_residual(residual, cfg.residual_tol);
    }
    return entry;
}

ReportEntry is_rectifying_position(const Curve& curve, const ToleranceConfig& cfg, int n_samples) {
    validate(cfg);
    std::vector<double> grid = classification_grid(curve, cfg, n_samples);
    const std::size_t m = grid.size();

    // Principal normal: component of alpha'' orthogonal to alpha'.
    std::vector<Vec> d1, d2;
    if (curve.is_sampled()) {
        d1 = derivative_samples(curve, 1);
        d2 = differentiate_samples(grid, d1);
    } else {
        d1.resize(m);
        d2.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            d1[i] = derivative(curve, grid[i], 1, cfg);
            d2[i] = derivative(curve, grid[i], 2, cfg);
        }
    }

    double residual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double speed = norm(d1[i]);
        if (!(speed > cfg.singular_guard)) throw SingularityError("is_rectifying_position: vanishing speed", {grid[i]});
        const Vec t = d1[i] / speed;
        Vec nperp = d2[i] - inner(d2[i], t) * t;
        const double nn = norm(nperp);
        if (!(nn > cfg.singular_guard)) {
            throw DegeneracyError("is_rectifying_position: principal normal undefined at s = " + format_real(grid[i]),
                                  nn);
        }
        const Vec pos = curve.position(grid[i]);
        const double pn = norm(pos);
        if (pn <= cfg.singular_guard) continue;  // position at the origin has no direction
        residual = std::max(residual, std::abs(inner(pos, nperp / nn)) / pn);
    }

    ReportEntry entry;
    entry.residual = residual;
    entry.verdict = verdict_from_residual(residual, cfg.residual_tol);
    return entry;
}

ReportEntry is_rectifying_type_myller(const MyllerSamples& samples, const ToleranceConfig& cfg) {
    validate(cfg);
    const std::size_t m = samples.s.size();
    if (samples.a1.size() != m || samples.a3.size() != m || samples.r_xi1.size() != m || samples.r_xi3.size() != m) {
        throw GridMismatchError("is_rectifying_type_myller: sample sequences are not aligned");
    }
    if (m < 3) throw InsufficientDataError("is_rectifying_type_myller: need at least 3 samples");

    auto scalar_derivative = [&](const std::vector<double>& f) {
        std::vector<Vec> lifted(m);
        for (std::size_t i = 0; i < m; ++i) {
            Vec v(2);
            v << f[i], 0.0;
            lifted[i] = v;
        }
        std::vector<Vec> d = differentiate_samples(samples.s, lifted);
        std::vector<double> out(m);
        for (std::size_t i = 0; i < m; ++i) out[i] = d[i][0];
        return out;
    };

    std::vector<double> d1 = scalar_derivative(samples.r_xi1);
    std::vector<double> d3 = scalar_derivative(samples.r_xi3);
    double res1 = 0.0, res3 = 0.0, magnitude = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        res1 = std::max(res1, std::abs(d1[i] - samples.a1[i]));
        res3 = std::max(res3, std::abs(d3[i] - samples.a3[i]));
        magnitude = std::max({magnitude, std::abs(samples.r_xi1[i]), std::abs(samples.r_xi3[i]),
                              std::abs(samples.a1[i]), std::abs(samples.a3[i])});
    }

    ReportEntry entry;
    entry.residual = std::max(res1, res3);
    entry.params = {res1, res3};
    entry.verdict = verdict_from_residual(entry.residual, cfg.residual_tol);
    if (magnitude <= cfg.singular_guard) {
        entry.degenerate = true;
        entry.note = "all samples vanish";
    }
    return entry;
}

ReportEntry is_helix(const Curve& curve, const ToleranceConfig& cfg, int n_samples) {
    validate(cfg);
    std::vector<double> grid = classification_grid(curve, cfg, n_samples);
    std::vector<Vec> t = tangent_samples(curve, grid, cfg);
    const std::size_t m = grid.size();
    const int n = curve.dim();

    Vec mean = Vec::Zero(n);
    for (const Vec& v : t) mean += v;
    mean /= static_cast<double>(m);

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    for (const Vec& v : t) {
        const Vec d = v - mean;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(m);

    ReportEntry entry;
    Vec axis;
    if (cov.cwiseAbs().maxCoeff() < 1e-18) {
        // All tangents identical: a straight line is a degenerate helix.
        axis = mean.normalized();
        entry.degenerate = true;
        entry.note = "straight line (angle 0)";
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
        axis = eig.eigenvectors().col(0);  // smallest eigenvalue: most constant direction
    }

    // Deterministic orientation: along the mean tangent when that is
    // meaningful, otherwise by the dominant component.
    const double along = inner(mean, axis);
    if (std::abs(along) > 1e-12) {
        if (along < 0.0) axis = -axis;
    } else {
        Eigen::Index imax;
        axis.cwiseAbs().maxCoeff(&imax);
        if (axis[imax] < 0.0) axis = -axis;
    }

    // Standard deviation of <T, axis> recomputed from the projections; the
    // eigenvalue itself carries O(eps*|C|) noise that sqrt would inflate.
    double mean_cos = 0.0;
    for (const Vec& v : t) mean_cos += inner(v, axis);
    mean_cos /= static_cast<double>(m);
    double var = 0.0;
    for (const Vec& v : t) {
        const double d = inner(v, axis) - mean_cos;
        var += d * d;
    }
    entry.residual = std::sqrt(var / static_cast<double>(m));
    if (!entry.degenerate && std::abs(mean_cos) > 1.0 - 1e-9) {
        entry.degenerate = true;
        entry.note = "axis parallel to tangent (angle 0)";
    }

    entry.params.assign(axis.data(), axis.data() + axis.size());
    entry.params.push_back(mean_cos);
    entry.verdict = verdict_from_residual(entry.residual, cfg.residual_tol);
    return entry;
}

ReportEntry is_spherical(const Curve& curve, const FrameField& field, const CurvatureField& curvatures,
                         const ToleranceConfig& cfg) {
    SphericalCoefficients sc = spherical_coefficients(curve, field, curvatures, cfg);
    ReportEntry entry;
    entry.residual = std::max(sc.distance_residual, sc.relation_residual);
    entry.verdict = verdict_from_residual(entry.residual, cfg.residual_tol);
    entry.params.assign(sc.center.data(), sc.center.data() + sc.center.size());
    entry.params.push_back(sc.r_fit);
    entry.params.insert(entry.params.end(), sc.a.begin(), sc.a.end());
    if (sc.underdetermined_center) entry.note = "sphere family under-determined; plane-centered sphere selected";
    return entry;
}

ReportEntry is_bertrand(const CurvatureField& curvatures, const ToleranceConfig& cfg) {
    validate(cfg);
    if (!curvatures.has_frenet()) throw UsageError("is_bertrand: needs Frenet kappa/tau samples");
    const std::size_t m = curvatures.size();

    double kmax = 0.0;
    for (std::size_t i = 0; i < m; ++i) kmax = std::max({kmax, std::abs(curvatures.kappa[i]), std::abs(curvatures.tau[i])});
    if (kmax <= cfg.singular_guard) throw DegeneracyError("is_bertrand: kappa and tau vanish (straight line)", kmax);

    // Rows [k1 k2] (a;b) = -1 with k1 = tau, k2 = -kappa; minimum-norm LS.
    Eigen::MatrixXd design(m, 2);
    Eigen::VectorXd b(m);
    for (std::size_t i = 0; i < m; ++i) {
        design(i, 0) = curvatures.tau[i];
        design(i, 1) = -curvatures.kappa[i];
        b[i] = -1.0;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    Eigen::Vector2d sol = svd.solve(b);

    double residual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        residual = std::max(residual, std::abs(sol[0] * curvatures.tau[i] - sol[1] * curvatures.kappa[i] + 1.0));
    }

    ReportEntry entry;
    entry.residual = residual;
    entry.params = {sol[0], sol[1]};
    entry.verdict = verdict_from_residual(residual, cfg.residual_tol);
    return entry;
}

ClassificationReport classify_all(const Curve& curve, const ToleranceConfig& cfg, int n_samples) {
    validate(cfg);
    ClassificationReport report;

    auto run = [&](const std::string& name, auto&& fn) {
        try {
            report.entries[name] = fn();
        } catch (const NumericalError& e) {
            ReportEntry entry;
            entry.verdict = Verdict::indeterminate;
            entry.residual = 0.0;
            entry.degenerate = true;
            entry.note = std::string("not evaluated: ") + e.what();
            report.entries[name] = entry;
        }
    };

    run("helix", [&] { return is_helix(curve, cfg, n_samples); });
    if (curve.dim() <= 4) {
        run("rectifying-position", [&] { return is_rectifying_position(curve, cfg, n_samples); });
    }
    if (curve.dim() == 3) {
        run("rectifying-chen", [&] { return is_rectifying_chen(curve, cfg, n_samples); });
        run("bertrand", [&] {
            KappaTauSamples kt = kappa_tau_samples(curve, cfg, n_samples);
            CurvatureField cf;
            cf.s = kt.s;
            cf.kappa = kt.kappa;
            cf.tau = kt.tau;
            cf.k.resize(kt.s.size());
            for (std::size_t i = 0; i < kt.s.size(); ++i) {
                Vec kk(2);
                kk << kt.tau[i], -kt.kappa[i];
                cf.k[i] = std::move(kk);
            }
            return is_bertrand(cf, cfg);
        });
    }
    run("spherical", [&] {
        std::vector<double> grid = classification_grid(curve, cfg, n_samples);
        Frame initial = default_initial_frame(curve, grid.front(), cfg);
        FrameField field = rmf_double_reflection(curve, grid, initial, cfg);
        CurvatureField curv = rm_curvatures(field, cfg);
        return is_spherical(curve, field, curv, cfg);
    });
    return report;
}

}  // namespace rmf
