#include "rmf/curve.hpp"

#include <algorithm>
#include <cmath>

#include "rmf/numfmt.hpp"

namespace rmf {

namespace {

// Index of the last sample with params[i] <= s (clamped to [0, m-2]) so that
// [i, i+1] brackets s.
std::size_t bracket(const std::vector<double>& params, double s) {
    auto it = std::upper_bound(params.begin(), params.end(), s);
    std::size_t i = static_cast<std::size_t>(it - params.begin());
    if (i > 0) --i;
    if (i + 1 >= params.size()) i = params.size() - 2;
    return i;
}

Vec lerp_samples(const std::vector<double>& s, const std::vector<Vec>& f, double x) {
    std::size_t i = bracket(s, x);
    double h = s[i + 1] - s[i];
    double t = (x - s[i]) / h;
    return (1.0 - t) * f[i] + t * f[i + 1];
}

}  // namespace

Curve Curve::analytic(int dim, double s_min, double s_max, Fn position, std::array<Fn, 3> derivatives) {
    if (dim < 2) throw UsageError("Curve: dim must be >= 2");
    if (!(s_min < s_max)) throw UsageError("Curve: require s_min < s_max");
    if (!position) throw UsageError("Curve: analytic curve needs a position evaluator");
    Curve c;
    c.dim_ = dim;
    c.sampled_ = false;
    c.s_min_ = s_min;
    c.s_max_ = s_max;
    c.position_ = std::move(position);
    c.derivatives_ = std::move(derivatives);
    return c;
}

Curve Curve::sampled(std::vector<double> params, std::vector<Vec> points) {
    if (params.size() != points.size()) throw UsageError("Curve: params/points size mismatch");
    if (params.size() < 2) throw UsageError("Curve: need at least 2 samples");
    for (std::size_t i = 1; i < params.size(); ++i) {
        if (!(params[i] > params[i - 1])) throw UsageError("Curve: sample parameters must be strictly increasing");
    }
    const Eigen::Index dim = points.front().size();
    if (dim < 2) throw UsageError("Curve: dim must be >= 2");
    for (const Vec& p : points) {
        if (p.size() != dim) throw UsageError("Curve: all sample points must share one dimension");
        check_finite(p, "Curve sample");
    }
    Curve c;
    c.dim_ = static_cast<int>(dim);
    c.sampled_ = true;
    c.s_min_ = params.front();
    c.s_max_ = params.back();
    c.params_ = std::move(params);
    c.points_ = std::move(points);
    return c;
}

Vec Curve::position(double s) const {
    if (!sampled_) {
        Vec p = position_(s);
        if (p.size() != dim_) throw NumericalError("Curve: evaluator returned wrong dimension");
        return p;
    }
    return lerp_samples(params_, points_, s);
}

const std::vector<double>& Curve::params() const {
    if (!sampled_) throw UsageError("Curve: params() on an analytic curve");
    return params_;
}

const std::vector<Vec>& Curve::points() const {
    if (!sampled_) throw UsageError("Curve: points() on an analytic curve");
    return points_;
}

Vec Curve::exact_derivative(double s, int order) const {
    return derivatives_[order - 1](s);
}

std::vector<Vec> differentiate_samples(const std::vector<double>& s, const std::vector<Vec>& f) {
    const std::size_t m = s.size();
    if (m < 3) throw InsufficientDataError("differentiate_samples: need at least 3 samples");
    std::vector<Vec> out(m);

    // Interior: 2nd-order three-point stencil on a possibly non-uniform grid.
    for (std::size_t i = 1; i + 1 < m; ++i) {
        double h1 = s[i] - s[i - 1];
        double h2 = s[i + 1] - s[i];
        out[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1]
               + (h2 - h1) / (h1 * h2) * f[i]
               + h1 / (h2 * (h1 + h2)) * f[i + 1];
    }
    // One-sided 2nd-order stencils at the ends.
    {
        double h1 = s[1] - s[0], h2 = s[2] - s[1];
        out[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[0]
               + (h1 + h2) / (h1 * h2) * f[1]
               - h1 / (h2 * (h1 + h2)) * f[2];
    }
    {
        double h1 = s[m - 2] - s[m - 3], h2 = s[m - 1] - s[m - 2];
        out[m - 1] = (2.0 * h2 + h1) / (h2 * (h1 + h2)) * f[m - 1]
                   - (h1 + h2) / (h1 * h2) * f[m - 2]
                   + h2 / (h1 * (h1 + h2)) * f[m - 3];
    }
    return out;
}

std::vector<Vec> derivative_samples(const Curve& curve, int order) {
    if (!curve.is_sampled()) throw UsageError("derivative_samples: expects a sampled curve");
    if (order < 1 || order > 3) throw UsageError("derivative_samples: unsupported order " + std::to_string(order));
    std::vector<Vec> f = curve.points();
    for (int k = 0; k < order; ++k) f = differentiate_samples(curve.params(), f);
    return f;
}

Vec derivative(const Curve& curve, double s, int order, const ToleranceConfig& cfg) {
    validate(cfg);
    if (order < 1 || order > 3) throw UsageError("derivative: unsupported order " + std::to_string(order));

    if (curve.is_sampled()) {
        if (s < curve.s_min() || s > curve.s_max()) {
            throw DomainError("derivative: s outside sampled domain");
        }
        return lerp_samples(curve.params(), derivative_samples(curve, order), s);
    }

    if (curve.has_derivative(order)) {
        if (s < curve.s_min() || s > curve.s_max()) throw DomainError("derivative: s outside domain");
        Vec d = curve.exact_derivative(s, order);
        check_finite(d, "derivative");
        return d;
    }

    const double h = cfg.step_for_order(order);
    if (s - order * h < curve.s_min() || s + order * h > curve.s_max()) {
        throw DomainError("derivative: s too close to the domain edge for the order-" +
                          std::to_string(order) + " stencil");
    }
    auto at = [&](double x) { return curve.position(x); };
    Vec d;
    switch (order) {
        case 1:
            d = (at(s + h) - at(s - h)) / (2.0 * h);
            break;
        case 2:
            d = (at(s + h) - 2.0 * at(s) + at(s - h)) / (h * h);
            break;
        default:
            d = (at(s + 2.0 * h) - 2.0 * at(s + h) + 2.0 * at(s - h) - at(s - 2.0 * h)) / (2.0 * h * h * h);
            break;
    }
    check_finite(d, "derivative");
    return d;
}

Curve arclength_reparam(const Curve& curve, int n_samples, const ToleranceConfig& cfg) {
    validate(cfg);
    if (n_samples < 4) throw UsageError("arclength_reparam: n_samples must be >= 4");

    // Dense probe grid for the speed quadrature. Derivatives need room for
    // the stencil when no exact evaluator exists, so shrink the probed range
    // accordingly; the trimmed sliver is O(fd_step) and irrelevant at the
    // 1e-4 targets.
    double lo = curve.s_min(), hi = curve.s_max();
    if (!curve.is_sampled() && !curve.has_derivative(1)) {
        lo += cfg.fd_step;
        hi -= cfg.fd_step;
    }
    const int probes = 4 * n_samples;
    std::vector<double> t(probes), speed(probes);
    for (int i = 0; i < probes; ++i) {
        t[i] = lo + (hi - lo) * static_cast<double>(i) / (probes - 1);
        double v = norm(derivative(curve, t[i], 1, cfg));
        if (!(v > cfg.singular_guard)) {
            throw SingularityError("arclength_reparam: curve is not regular at s = " + format_real(t[i]), {t[i]});
        }
        speed[i] = v;
    }

    std::vector<double> arc(probes);
    arc[0] = 0.0;
    for (int i = 1; i < probes; ++i) {
        arc[i] = arc[i - 1] + 0.5 * (t[i] - t[i - 1]) * (speed[i] + speed[i - 1]);
    }
    const double total = arc.back();

    // Invert the monotone map t -> arc(t) by linear interpolation.
    std::vector<double> params(n_samples);
    std::vector<Vec> points(n_samples);
    int j = 0;
    for (int i = 0; i < n_samples; ++i) {
        double target = total * static_cast<double>(i) / (n_samples - 1);
        while (j + 2 < probes && arc[j + 1] < target) ++j;
        double seg = arc[j + 1] - arc[j];
        double w = seg > 0.0 ? (target - arc[j]) / seg : 0.0;
        double ts = t[j] + w * (t[j + 1] - t[j]);
        params[i] = target;
        points[i] = curve.position(ts);
    }
    return Curve::sampled(std::move(params), std::move(points));
}

Curve line_curve(int dim, double length) {
    auto e1 = [dim](double scale) {
        Vec v = Vec::Zero(dim);
        v[0] = scale;
        return v;
    };
    return Curve::analytic(dim, 0.0, length,
                           [e1](double s) { return e1(s); },
                           {[e1](double) { return e1(1.0); },
                            [e1](double) { return e1(0.0); },
                            [e1](double) { return e1(0.0); }});
}

Curve circle_curve(double radius, int dim) {
    if (!(radius > 0.0)) throw UsageError("circle: radius must be positive");
    auto embed = [dim](double x, double y) {
        Vec v = Vec::Zero(dim);
        v[0] = x;
        v[1] = y;
        return v;
    };
    const double r = radius;
    return Curve::analytic(dim, 0.0, 2.0 * M_PI,
                           [=](double t) { return embed(r * std::cos(t), r * std::sin(t)); },
                           {[=](double t) { return embed(-r * std::sin(t), r * std::cos(t)); },
                            [=](double t) { return embed(-r * std::cos(t), -r * std::sin(t)); },
                            [=](double t) { return embed(r * std::sin(t), -r * std::cos(t)); }});
}

Curve great_circle_curve(double radius) {
    if (!(radius > 0.0)) throw UsageError("great-circle: radius must be positive");
    // Fixed tilt so the circle is not axis-aligned; still centered at the
    // origin, hence on the sphere of the same radius.
    Eigen::Matrix3d rot =
        (Eigen::AngleAxisd(0.4, Eigen::Vector3d::UnitX()) * Eigen::AngleAxisd(0.3, Eigen::Vector3d::UnitZ()))
            .toRotationMatrix();
    const double r = radius;
    auto plane = [=](double c, double s_) {
        Eigen::Vector3d p = rot * Eigen::Vector3d(c, s_, 0.0);
        Vec v(3);
        v << p[0], p[1], p[2];
        return v;
    };
    return Curve::analytic(3, 0.0, 2.0 * M_PI,
                           [=](double t) { return plane(r * std::cos(t), r * std::sin(t)); },
                           {[=](double t) { return plane(-r * std::sin(t), r * std::cos(t)); },
                            [=](double t) { return plane(-r * std::cos(t), -r * std::sin(t)); },
                            [=](double t) { return plane(r * std::sin(t), -r * std::cos(t)); }});
}

Curve helix_curve() {
    // Circular helix of radius 24 and pitch coefficient 7/25; unit speed
    // because (24/25)^2 + (7/25)^2 = 1.
    constexpr double a = 24.0, b = 7.0, w = 1.0 / 25.0;
    auto at = [=](double s) {
        Vec v(3);
        v << a * std::cos(w * s), a * std::sin(w * s), b * w * s;
        return v;
    };
    auto d1 = [=](double s) {
        Vec v(3);
        v << -a * w * std::sin(w * s), a * w * std::cos(w * s), b * w;
        return v;
    };
    auto d2 = [=](double s) {
        Vec v(3);
        v << -a * w * w * std::cos(w * s), -a * w * w * std::sin(w * s), 0.0;
        return v;
    };
    auto d3 = [=](double s) {
        Vec v(3);
        v << a * w * w * w * std::sin(w * s), -a * w * w * w * std::cos(w * s), 0.0;
        return v;
    };
    return Curve::analytic(3, 0.0, 120.0, at, {d1, d2, d3});
}

Curve twisted_cubic_curve() {
    auto at = [](double t) {
        Vec v(3);
        v << t, t * t, t * t * t;
        return v;
    };
    auto d1 = [](double t) {
        Vec v(3);
        v << 1.0, 2.0 * t, 3.0 * t * t;
        return v;
    };
    auto d2 = [](double t) {
        Vec v(3);
        v << 0.0, 2.0, 6.0 * t;
        return v;
    };
    auto d3 = [](double) {
        Vec v(3);
        v << 0.0, 0.0, 6.0;
        return v;
    };
    return Curve::analytic(3, -1.0, 1.0, at, {d1, d2, d3});
}

Curve builtin_curve(const std::string& name, int dim) {
    std::string base = name;
    double param = 0.0;
    bool has_param = false;
    if (auto colon = name.find(':'); colon != std::string::npos) {
        base = name.substr(0, colon);
        char* end = nullptr;
        const std::string arg = name.substr(colon + 1);
        param = std::strtod(arg.c_str(), &end);
        if (end == arg.c_str() || *end != '\0') throw UsageError("builtin curve: bad parameter in '" + name + "'");
        has_param = true;
    }
    if (base == "line") return line_curve(dim, has_param ? param : 10.0);
    if (base == "circle") return circle_curve(has_param ? param : 1.0, dim);
    if (base == "great-circle") return great_circle_curve(has_param ? param : 1.0);
    if (base == "helix") return helix_curve();
    if (base == "twisted-cubic") return twisted_cubic_curve();
    throw UsageError("unknown builtin curve '" + name +
                     "' (expected line, circle[:r], great-circle[:r], helix, twisted-cubic)");
}

}  // namespace rmf
