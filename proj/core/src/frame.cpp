#include "rmf/frame.hpp"

#include <algorithm>
#include <cmath>

#include "rmf/numfmt.hpp"

namespace rmf {

double Frame::orthonormality_error() const {
    Eigen::MatrixXd g = m.transpose() * m;
    g.diagonal().array() -= 1.0;
    return g.cwiseAbs().maxCoeff();
}

std::vector<double> FrameField::grid() const {
    std::vector<double> g(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) g[i] = frames[i].s;
    return g;
}

Vec CurvatureField::k_at(double x) const {
    auto it = std::upper_bound(s.begin(), s.end(), x);
    std::size_t i = static_cast<std::size_t>(it - s.begin());
    if (i > 0) --i;
    if (i + 1 >= s.size()) i = s.size() - 2;
    double h = s[i + 1] - s[i];
    double t = (x - s[i]) / h;
    return (1.0 - t) * k[i] + t * k[i + 1];
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
    if (n < 2 || !(lo < hi)) throw UsageError("uniform_grid: need n >= 2 and lo < hi");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    g.front() = lo;  // pin the ends: rounding must not push past the domain
    g.back() = hi;
    return g;
}

Vec unit_tangent(const Curve& curve, double s, const ToleranceConfig& cfg) {
    Vec d = derivative(curve, s, 1, cfg);
    double v = norm(d);
    if (!(v > cfg.singular_guard)) {
        throw SingularityError("unit_tangent: vanishing speed at s = " + format_real(s), {s});
    }
    return d / v;
}

void reorthonormalize(Eigen::MatrixXd& m) {
    // Modified Gram-Schmidt over the columns, first column first, so the
    // tangent slot keeps its direction and the orientation is preserved.
    const Eigen::Index n = m.cols();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            m.col(i) -= m.col(j).dot(m.col(i)) * m.col(j);
        }
        m.col(i).normalize();
    }
}

namespace {

// Unit tangents at every grid point; sampled curves get one stencil pass
// over their own samples plus interpolation instead of a pass per query.
std::vector<Vec> tangents_on_grid(const Curve& curve, const std::vector<double>& grid, const ToleranceConfig& cfg) {
    std::vector<Vec> t(grid.size());
    if (curve.is_sampled()) {
        std::vector<Vec> d1 = derivative_samples(curve, 1);
        const std::vector<double>& sp = curve.params();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            auto it = std::upper_bound(sp.begin(), sp.end(), grid[i]);
            std::size_t j = static_cast<std::size_t>(it - sp.begin());
            if (j > 0) --j;
            if (j + 1 >= sp.size()) j = sp.size() - 2;
            const double w = (grid[i] - sp[j]) / (sp[j + 1] - sp[j]);
            Vec d = (1.0 - w) * d1[j] + w * d1[j + 1];
            const double v = norm(d);
            if (!(v > cfg.singular_guard)) {
                throw SingularityError("tangent: vanishing speed at s = " + format_real(grid[i]), {grid[i]});
            }
            t[i] = d / v;
        }
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i) t[i] = unit_tangent(curve, grid[i], cfg);
    }
    return t;
}

void check_orthonormal_initial(const Frame& initial, const ToleranceConfig& cfg) {
    if (initial.orthonormality_error() > std::max(cfg.ortho_tol, 1e-9)) {
        throw UsageError("initial frame is not orthonormal");
    }
}

// Completes an orthonormal set of n-1 columns to a positively oriented
// orthonormal basis of R^n.
Vec orientation_completion(const Eigen::MatrixXd& partial) {
    const Eigen::Index n = partial.rows();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(partial.transpose());
    Eigen::MatrixXd kernel = lu.kernel();
    Vec last = kernel.col(0).normalized();
    Eigen::MatrixXd full(n, n);
    full.leftCols(n - 1) = partial;
    full.col(n - 1) = last;
    if (full.determinant() < 0.0) last = -last;
    return last;
}

}  // namespace

Frame frenet_frame(const Curve& curve, double s, const ToleranceConfig& cfg) {
    validate(cfg);
    const int n = curve.dim();
    if (n > 4) throw UsageError("frenet_frame: supported for dim <= 4; use the RMF constructions for higher dimensions");

    std::vector<Vec> d(n - 1);
    for (int k = 1; k <= n - 1; ++k) d[k - 1] = derivative(curve, s, k, cfg);

    Eigen::MatrixXd derivs(n, n - 1);
    for (int k = 0; k < n - 1; ++k) derivs.col(k) = d[k];
    const double gram = (derivs.transpose() * derivs).determinant();
    if (!(gram > cfg.singular_guard)) {
        throw DegeneracyError("frenet_frame: derivatives up to order " + std::to_string(n - 1) +
                                  " are linearly dependent at s = " + format_real(s) +
                                  " (Gram determinant " + format_real(gram) + ")",
                              gram);
    }

    Eigen::MatrixXd m(n, n);
    for (int k = 0; k < n - 1; ++k) {
        Vec e = d[k];
        for (int j = 0; j < k; ++j) e -= m.col(j).dot(e) * m.col(j);
        m.col(k) = e.normalized();
    }
    m.col(n - 1) = orientation_completion(m.leftCols(n - 1));
    return Frame{s, std::move(m)};
}

std::pair<double, double> frenet_kappa_tau(const Curve& curve, double s, const ToleranceConfig& cfg) {
    if (curve.dim() != 3) throw UsageError("frenet_kappa_tau: defined for dim 3");
    Vec d1 = derivative(curve, s, 1, cfg);
    Vec d2 = derivative(curve, s, 2, cfg);
    Vec d3 = derivative(curve, s, 3, cfg);
    Eigen::Vector3d a(d1[0], d1[1], d1[2]), b(d2[0], d2[1], d2[2]), c(d3[0], d3[1], d3[2]);
    const double speed = a.norm();
    if (!(speed > cfg.singular_guard)) throw SingularityError("frenet_kappa_tau: vanishing speed", {s});
    Eigen::Vector3d cross = a.cross(b);
    const double cn = cross.norm();
    const double kappa = cn / (speed * speed * speed);
    if (!(cn > cfg.singular_guard)) {
        throw DegeneracyError("frenet_kappa_tau: vanishing curvature at s = " + format_real(s), cn * cn);
    }
    const double tau = cross.dot(c) / (cn * cn);
    return {kappa, tau};
}

Frame default_initial_frame(const Curve& curve, double s0, const ToleranceConfig& cfg) {
    validate(cfg);
    const int n = curve.dim();
    Eigen::MatrixXd m(n, n);
    m.col(0) = unit_tangent(curve, s0, cfg);

    // Ambient basis vectors, the one least parallel to the tangent first.
    std::vector<int> order(n);
    int least = 0;
    for (int i = 1; i < n; ++i) {
        if (std::abs(m.col(0)[i]) < std::abs(m.col(0)[least])) least = i;
    }
    order[0] = least;
    for (int i = 0, j = 1; i < n; ++i) {
        if (i != least) order[j++] = i;
    }

    int filled = 1;
    for (int idx : order) {
        if (filled == n) break;
        Vec e = Vec::Zero(n);
        e[idx] = 1.0;
        for (int j = 0; j < filled; ++j) e -= m.col(j).dot(e) * m.col(j);
        double r = norm(e);
        if (r > 1e-10) m.col(filled++) = e / r;
    }
    if (filled != n) throw NumericalError("default_initial_frame: could not complete a basis");
    if (m.determinant() < 0.0) m.col(n - 1) = -m.col(n - 1);
    return Frame{s0, std::move(m)};
}

FrameField rmf_double_reflection(const Curve& curve, const std::vector<double>& s_grid, const Frame& initial,
                                 const ToleranceConfig& cfg) {
    validate(cfg);
    if (s_grid.size() < 2) throw UsageError("rmf_double_reflection: grid needs at least 2 points");
    for (std::size_t i = 1; i < s_grid.size(); ++i) {
        if (!(s_grid[i] > s_grid[i - 1])) throw UsageError("rmf_double_reflection: grid must be strictly increasing");
    }
    check_orthonormal_initial(initial, cfg);
    const int n = curve.dim();
    if (initial.dim() != n) throw DimensionError(initial.dim(), n);
    std::vector<Vec> tangents = tangents_on_grid(curve, s_grid, cfg);
    if (norm(initial.xi(1) - tangents.front()) > 1e-6) {
        throw UsageError("rmf_double_reflection: initial xi_1 must equal the unit tangent at the grid start");
    }

    FrameField field;
    field.base = curve;
    field.frames.reserve(s_grid.size());

    Eigen::MatrixXd m = initial.m;
    m.col(0) = tangents.front();
    reorthonormalize(m);
    field.frames.push_back(Frame{s_grid.front(), m});

    Vec x_prev = curve.position(s_grid.front());
    for (std::size_t i = 1; i < s_grid.size(); ++i) {
        const double s = s_grid[i];
        Vec x = curve.position(s);
        const Vec& t = tangents[i];

        Vec v1 = x - x_prev;
        const double c1 = v1.dot(v1);
        if (!(c1 > 1e-14 * 1e-14)) {
            throw NumericalError("rmf_double_reflection: coincident samples at s = " + format_real(s));
        }

        Eigen::MatrixXd next(n, n);
        Vec t_reflected = m.col(0) - (2.0 / c1) * v1.dot(m.col(0)) * v1;
        Vec v2 = t - t_reflected;
        const double c2 = v2.dot(v2);
        for (int j = 1; j < n; ++j) {
            Vec r = m.col(j) - (2.0 / c1) * v1.dot(m.col(j)) * v1;
            if (c2 > 1e-28) r -= (2.0 / c2) * v2.dot(r) * v2;
            next.col(j) = r;
        }
        next.col(0) = t;
        reorthonormalize(next);

        m = std::move(next);
        field.frames.push_back(Frame{s, m});
        x_prev = std::move(x);
    }
    return field;
}

FrameField rmf_ode(const CurvatureField& curvatures, const Frame& initial, const ToleranceConfig& cfg) {
    validate(cfg);
    const std::size_t steps = curvatures.size();
    if (steps < 2) throw InsufficientDataError("rmf_ode: need at least 2 curvature samples");
    check_orthonormal_initial(initial, cfg);
    const int n = initial.dim();
    if (curvatures.normals() != n - 1) {
        throw DimensionError(curvatures.normals(), n - 1);
    }

    double kmax = 0.0, hmax = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        kmax = std::max(kmax, curvatures.k[i].cwiseAbs().maxCoeff());
        if (i > 0) hmax = std::max(hmax, curvatures.s[i] - curvatures.s[i - 1]);
    }
    if (kmax > 0.0 && hmax > 0.1 / kmax) {
        throw AccuracyError("rmf_ode: grid step " + format_real(hmax) + " exceeds 0.1/max|k| = " +
                            format_real(0.1 / kmax));
    }

    // Right-hand side of the skew system, with k(s) interpolated linearly.
    auto rhs = [&](double s, const Eigen::MatrixXd& f) {
        Vec kk = curvatures.k_at(s);
        Eigen::MatrixXd d(n, n);
        Vec x1 = Vec::Zero(n);
        for (int j = 1; j < n; ++j) {
            x1 += kk[j - 1] * f.col(j);
            d.col(j) = -kk[j - 1] * f.col(0);
        }
        d.col(0) = x1;
        return d;
    };

    FrameField field;
    field.frames.reserve(steps);
    Eigen::MatrixXd m = initial.m;
    reorthonormalize(m);
    field.frames.push_back(Frame{curvatures.s.front(), m});

    std::vector<Vec> base_pts;
    base_pts.reserve(steps);
    Vec pos = Vec::Zero(n);
    base_pts.push_back(pos);

    for (std::size_t i = 1; i < steps; ++i) {
        const double s0 = curvatures.s[i - 1];
        const double h = curvatures.s[i] - s0;
        Eigen::MatrixXd k1 = rhs(s0, m);
        Eigen::MatrixXd k2 = rhs(s0 + 0.5 * h, m + 0.5 * h * k1);
        Eigen::MatrixXd k3 = rhs(s0 + 0.5 * h, m + 0.5 * h * k2);
        Eigen::MatrixXd k4 = rhs(s0 + h, m + h * k3);
        Eigen::MatrixXd next = m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        reorthonormalize(next);

        pos += 0.5 * h * (m.col(0) + next.col(0));
        base_pts.push_back(pos);
        m = std::move(next);
        field.frames.push_back(Frame{curvatures.s[i], m});
    }
    field.base = Curve::sampled(curvatures.s, std::move(base_pts));
    return field;
}

CurvatureField rm_curvatures(const FrameField& field, const ToleranceConfig& cfg) {
    validate(cfg);
    if (field.size() < 3) throw InsufficientDataError("rm_curvatures: need at least 3 frames");
    const int n = field.dim();
    const std::size_t m = field.size();

    std::vector<double> s = field.grid();
    std::vector<Vec> tangents(m);
    for (std::size_t i = 0; i < m; ++i) tangents[i] = field.frames[i].xi(1);
    std::vector<Vec> dt = differentiate_samples(s, tangents);

    CurvatureField out;
    out.s = s;
    out.k.resize(m);
    out.residual.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        Vec kk(n - 1);
        Vec recon = Vec::Zero(n);
        for (int j = 1; j < n; ++j) {
            kk[j - 1] = inner(dt[i], field.frames[i].xi(j + 1));
            recon += kk[j - 1] * field.frames[i].xi(j + 1);
        }
        out.k[i] = std::move(kk);
        out.residual[i] = norm(dt[i] - recon);
    }
    return out;
}

std::pair<FrameField, CurvatureField> frenet_as_rmf(const Curve& curve, const std::vector<double>& s_grid,
                                                    const ToleranceConfig& cfg) {
    validate(cfg);
    if (curve.dim() != 3) throw UsageError("frenet_as_rmf: defined for dim 3");
    if (s_grid.size() < 2) throw UsageError("frenet_as_rmf: grid needs at least 2 points");

    const std::size_t m = s_grid.size();
    FrameField field;
    CurvatureField curv;
    curv.s = s_grid;
    curv.k.resize(m);
    curv.kappa.resize(m);
    curv.tau.resize(m);
    curv.theta.resize(m);
    field.frames.reserve(m);

    std::vector<Vec> normals(m);
    for (std::size_t i = 0; i < m; ++i) {
        Frame fr = frenet_frame(curve, s_grid[i], cfg);  // columns T, N, B
        auto [kappa, tau] = frenet_kappa_tau(curve, s_grid[i], cfg);
        if (!(kappa > cfg.singular_guard)) {
            throw DegeneracyError("frenet_as_rmf: vanishing curvature at s = " + format_real(s_grid[i]), kappa);
        }
        Eigen::MatrixXd reordered(3, 3);
        reordered.col(0) = fr.m.col(1);  // N
        reordered.col(1) = fr.m.col(2);  // B
        reordered.col(2) = fr.m.col(0);  // T
        field.frames.push_back(Frame{s_grid[i], std::move(reordered)});
        normals[i] = fr.m.col(1);

        curv.kappa[i] = kappa;
        curv.tau[i] = tau;
        Vec kk(2);
        kk << tau, -kappa;
        curv.k[i] = std::move(kk);
    }

    // theta = integral of tau from the grid start (trapezoid).
    curv.theta[0] = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
        curv.theta[i] = curv.theta[i - 1] + 0.5 * (s_grid[i] - s_grid[i - 1]) * (curv.tau[i] + curv.tau[i - 1]);
    }

    // Base curve: the integral curve of N.
    std::vector<Vec> pts(m);
    Vec pos = Vec::Zero(3);
    pts[0] = pos;
    for (std::size_t i = 1; i < m; ++i) {
        pos += 0.5 * (s_grid[i] - s_grid[i - 1]) * (normals[i] + normals[i - 1]);
        pts[i] = pos;
    }
    field.base = Curve::sampled(s_grid, std::move(pts));
    return {std::move(field), std::move(curv)};
}

}  // namespace rmf
