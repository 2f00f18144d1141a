// rmf: rotation minimizing frames, rectifying-type constructions, and curve
// classification from the command line.
//
//   rmf <command> [--curve NAME|--input PATH] [--dim N] [--range A:B]
//       [--samples K] [--method frenet|rmf-dr|rmf-ode] [--type J]
//       [--constants c1,c2,...] [--free-const C] [--format csv|json|svg]
//       [--project xy|xz|yz] [--out PATH]
//
// Exit codes: 0 success, 2 usage error, 3 numerical/singularity error,
// 4 I/O error. RMF_TOL overrides the residual tolerance.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "rmf/classify.hpp"
#include "rmf/io.hpp"
#include "rmf/numfmt.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace rmf;

namespace {

struct Options {
    std::string curve;
    std::string input;
    int dim = 3;
    std::string range;
    int samples = 2000;
    std::string method = "rmf-dr";
    int type_index = 1;
    std::string constants;
    std::optional<double> free_const;
    std::string format = "csv";
    std::string project = "xy";
    std::string out;
    bool finite_differences = false;
};

ToleranceConfig tolerances_from_env() {
    ToleranceConfig cfg;
    if (const char* tol = std::getenv("RMF_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(tol, &end);
        if (end == tol || *end != '\0' || !(v > 0.0)) {
            throw UsageError(std::string("RMF_TOL: expected a positive real, got '") + tol + "'");
        }
        cfg.residual_tol = v;
    }
    return cfg;
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("--range expects A:B");
    char *end_a = nullptr, *end_b = nullptr;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    const double lo = std::strtod(a.c_str(), &end_a);
    const double hi = std::strtod(b.c_str(), &end_b);
    if (end_a == a.c_str() || *end_a != '\0' || end_b == b.c_str() || *end_b != '\0' || !(lo < hi)) {
        throw UsageError("--range expects A:B with A < B");
    }
    return {lo, hi};
}

std::vector<double> parse_constants(const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0') throw UsageError("--constants: bad number '" + cell + "'");
        out.push_back(v);
    }
    return out;
}

// Strips the exact derivative evaluators so every derivative comes from
// finite differences.
Curve without_derivatives(const Curve& curve) {
    if (curve.is_sampled()) return curve;
    auto base = std::make_shared<Curve>(curve);
    return Curve::analytic(curve.dim(), curve.s_min(), curve.s_max(),
                           [base](double s) { return base->position(s); });
}

Curve load_curve(const Options& opt) {
    if (!opt.input.empty() && !opt.curve.empty()) throw UsageError("give either --curve or --input, not both");
    Curve c;
    if (!opt.input.empty()) {
        c = read_curve_csv_file(opt.input);
        if (opt.dim != 3 && c.dim() != opt.dim) throw DimensionError(c.dim(), opt.dim);
    } else {
        c = builtin_curve(opt.curve.empty() ? "helix" : opt.curve, opt.dim);
    }
    return opt.finite_differences ? without_derivatives(c) : c;
}

std::vector<double> make_grid(const Curve& curve, const Options& opt, const ToleranceConfig& cfg) {
    if (opt.samples < 4) throw UsageError("--samples must be at least 4");
    if (curve.is_sampled()) {
        if (opt.range.empty()) return curve.params();
        auto [lo, hi] = parse_range(opt.range);
        std::vector<double> grid;
        for (double s : curve.params()) {
            if (s >= lo && s <= hi) grid.push_back(s);
        }
        if (grid.size() < 4) throw UsageError("--range keeps fewer than 4 samples");
        return grid;
    }
    double lo = curve.s_min(), hi = curve.s_max();
    if (!opt.range.empty()) {
        std::tie(lo, hi) = parse_range(opt.range);
        if (lo < curve.s_min() || hi > curve.s_max()) throw UsageError("--range outside the curve domain");
    }
    if (!curve.has_derivative(1)) {
        const double margin = 2.0 * cfg.fd_step3 * 1.01;
        lo += margin;
        hi -= margin;
        if (!(lo < hi)) throw UsageError("domain too small for finite-difference stencils");
    }
    return uniform_grid(lo, hi, opt.samples);
}

std::string sibling_path(const std::string& primary, const std::string& strip, const std::string& suffix) {
    std::string base = primary;
    if (base.size() >= strip.size() && base.compare(base.size() - strip.size(), strip.size(), strip) == 0) {
        base.resize(base.size() - strip.size());
    }
    return base + suffix;
}

FrameField frames_by_method(const Curve& curve, const std::vector<double>& grid, const std::string& method,
                            const ToleranceConfig& cfg, CurvatureField* curvatures_out) {
    if (method == "frenet") {
        auto [field, curv] = frenet_as_rmf(curve, grid, cfg);
        if (curvatures_out) *curvatures_out = curv;
        return field;
    }
    FrameField dr = rmf_double_reflection(curve, grid, default_initial_frame(curve, grid.front(), cfg), cfg);
    CurvatureField curv = rm_curvatures(dr, cfg);
    if (curvatures_out) *curvatures_out = curv;
    if (method == "rmf-dr") return dr;
    if (method == "rmf-ode") return rmf_ode(curv, dr.frames.front(), cfg);
    throw UsageError("--method must be frenet, rmf-dr or rmf-ode");
}

std::pair<int, int> projection_axes(const std::string& name) {
    if (name == "xy") return {0, 1};
    if (name == "xz") return {0, 2};
    if (name == "yz") return {1, 2};
    throw UsageError("--project must be xy, xz or yz");
}

void check_format(const std::string& format) {
    if (format != "csv" && format != "json" && format != "svg") {
        throw UsageError("--format must be csv, json or svg");
    }
}

int cmd_frame(const Options& opt) {
    ToleranceConfig cfg = tolerances_from_env();
    check_format(opt.format);
    Curve curve = load_curve(opt);
    std::vector<double> grid = make_grid(curve, opt, cfg);

    CurvatureField curv;
    FrameField field = frames_by_method(curve, grid, opt.method, cfg, &curv);

    const std::string out = opt.out.empty() ? "frames.json" : opt.out;
    write_text_file(out, framefield_json(field));
    std::cout << "wrote " << out << " (" << field.size() << " frames, method " << opt.method << ")\n";
    if (opt.method != "frenet") {
        const std::string curv_out = sibling_path(out, ".json", ".curvatures.csv");
        write_curvature_csv_file(curv_out, curv);
        std::cout << "wrote " << curv_out << "\n";
    }
    return 0;
}

int cmd_curvature(const Options& opt) {
    ToleranceConfig cfg = tolerances_from_env();
    Curve curve = load_curve(opt);
    std::vector<double> grid = make_grid(curve, opt, cfg);
    CurvatureField curv;
    frames_by_method(curve, grid, opt.method, cfg, &curv);
    const std::string out = opt.out.empty() ? "curvatures.csv" : opt.out;
    write_curvature_csv_file(out, curv);
    std::cout << "wrote " << out << " (" << curv.size() << " samples, method " << opt.method << ")\n";
    return 0;
}

int cmd_construct(const Options& opt) {
    ToleranceConfig cfg = tolerances_from_env();
    check_format(opt.format);
    Curve curve = load_curve(opt);
    std::vector<double> grid = make_grid(curve, opt, cfg);

    CurvatureField curv;
    FrameField field = frames_by_method(curve, grid, opt.method, cfg, &curv);

    RectifyingSpec spec;
    spec.n = curve.dim();
    spec.type_index = opt.type_index;
    spec.constants = parse_constants(opt.constants);
    if (static_cast<int>(spec.constants.size()) != spec.n - 2) {
        throw UsageError("--constants: expected " + std::to_string(spec.n - 2) + " values for dim " +
                         std::to_string(spec.n));
    }
    if (opt.free_const) {
        spec.check_shape();
        spec.free_coeff.assign(field.size(), *opt.free_const);
    } else {
        spec = derive_free_coefficient(curv, spec, cfg);
    }

    Curve psi = construct_type_curve(field, spec);
    DerivativeResidualReport residuals = verify_derivative_rectifying(field, spec, cfg);

    const std::string out = opt.out.empty() ? "constructed.csv" : opt.out;
    write_curve_csv_file(out, psi);

    ordered_json rep;
    rep["n"] = spec.n;
    rep["type_index"] = spec.type_index;
    ordered_json cs = ordered_json::array();
    for (double c : spec.constants) cs.push_back(round_emitted(c));
    rep["constants"] = std::move(cs);
    rep["free_coeff_first"] = round_emitted(spec.free_coeff.front());
    rep["free_coeff_last"] = round_emitted(spec.free_coeff.back());
    rep["max_inner_psi_prime_xi1"] = round_emitted(residuals.max_xi1);
    rep["max_inner_psi_prime_fixed"] = round_emitted(residuals.max_fixed);

    // Constant derived coefficient: the construction degenerates to a fixed
    // vector whose axis the normal integral curves wind around.
    double spread = 0.0;
    {
        double mean = 0.0;
        for (double v : spec.free_coeff) mean += v;
        mean /= static_cast<double>(spec.free_coeff.size());
        double var = 0.0;
        for (double v : spec.free_coeff) var += (v - mean) * (v - mean);
        spread = std::sqrt(var / static_cast<double>(spec.free_coeff.size())) / std::max(1.0, std::abs(mean));
        rep["free_coeff_mean"] = round_emitted(mean);
        rep["free_coeff_spread"] = round_emitted(spread);
        rep["free_coeff_constant"] = spread < 1e-6 ? "yes" : (spread < 1e-3 ? "indeterminate" : "no");
    }
    if (spread < 1e-3) {
        try {
            AxisReport axis = helix_axis(field, curv, spec, cfg);
            ordered_json ax;
            ordered_json u = ordered_json::array();
            for (Eigen::Index i = 0; i < axis.axis_unit.size(); ++i) u.push_back(round_emitted(axis.axis_unit[i]));
            ax["axis_unit"] = std::move(u);
            ax["constancy_residual"] = round_emitted(axis.constancy_residual);
            ordered_json means = ordered_json::array(), devs = ordered_json::array();
            for (double v : axis.angle_mean) means.push_back(round_emitted(v));
            for (double v : axis.angle_residual) devs.push_back(round_emitted(v));
            ax["angle_mean"] = std::move(means);
            ax["angle_residual"] = std::move(devs);
            rep["helix_axis"] = std::move(ax);
            std::cout << "constant free coefficient " << format_real(spec.free_coeff.front())
                      << ": helix-axis branch triggered\n";
        } catch (const ZeroVectorError&) {
            rep["helix_axis"] = "zero vector";
        }
    }
    const std::string rep_out = sibling_path(out, ".csv", ".report.json");
    write_text_file(rep_out, rep.dump(2) + "\n");

    if (opt.format == "svg") {
        auto [ax, ay] = projection_axes(opt.project);
        const std::string svg_out = sibling_path(out, ".csv", ".svg");
        write_svg_polyline_file(svg_out, psi, ax, ay);
        std::cout << "wrote " << svg_out << "\n";
    }
    std::cout << "wrote " << out << " and " << rep_out << " (max |<psi',xi_1>| = " << format_real(residuals.max_xi1)
              << ")\n";
    return 0;
}

int cmd_classify(const Options& opt) {
    ToleranceConfig cfg = tolerances_from_env();
    Curve curve = load_curve(opt);
    const int samples = opt.samples == 2000 ? 8192 : opt.samples;  // denser default for the sphere fit
    ClassificationReport report = classify_all(curve, cfg, samples);
    const std::string out = opt.out.empty() ? "classification.json" : opt.out;
    write_text_file(out, classification_json(report));
    for (const auto& [name, entry] : report.entries) {
        std::cout << name << ": " << to_string(entry.verdict) << " (residual " << format_real(entry.residual)
                  << (entry.degenerate ? ", degenerate" : "") << ")\n";
    }
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_demo_helix(const Options& opt) {
    ToleranceConfig cfg = tolerances_from_env();
    Curve helix = builtin_curve("helix", 3);
    if (opt.finite_differences) helix = without_derivatives(helix);

    double lo1 = 1e-6, hi1 = 120.0;  // beta_1 stream
    double lo2 = 1.0, hi2 = 120.0;   // beta_2 stream starts away from the k2 zero at s=0
    if (!opt.range.empty()) {
        std::tie(lo1, hi1) = parse_range(opt.range);
        lo2 = lo1;
        hi2 = hi1;
    }

    // The divisor curvatures vanish where cos/sin of the rotation angle do:
    // k1 at s = 625*pi/14 + k*625*pi/7, k2 at s = k*625*pi/7. Refuse domains
    // that contain one rather than emitting a curve with a pole inside.
    const double period = 625.0 * M_PI / 7.0;
    auto first_zero_inside = [&](double offset, double lo, double hi) -> std::optional<double> {
        const double k = std::ceil((lo - offset) / period - 1e-12);
        const double zero = offset + k * period;
        if (zero <= hi + 1e-12) return zero;
        return std::nullopt;
    };
    if (auto z = first_zero_inside(period / 2.0, lo1, hi1)) {
        throw SingularityError("demo-helix: k1 vanishes at s = " + format_real(*z) +
                                   " (= 625*pi/14 mod period) inside the requested domain",
                               {*z});
    }
    if (auto z = first_zero_inside(0.0, lo2, hi2)) {
        throw SingularityError("demo-helix: k2 vanishes at s = " + format_real(*z) + " inside the requested domain",
                               {*z});
    }

    // Printed constants, computed from the curve itself at the domain middle.
    auto [kappa, tau] = frenet_kappa_tau(helix, 0.5 * (lo1 + hi1), cfg);
    const double kappa_ref = 24.0 / 625.0, tau_ref = 7.0 / 625.0;
    std::cout << "kappa = " << format_real(kappa) << " (reference 24/625 = " << format_real(kappa_ref)
              << ", |error| = " << format_real(std::abs(kappa - kappa_ref)) << ")\n";
    std::cout << "tau   = " << format_real(tau) << " (reference 7/625 = " << format_real(tau_ref)
              << ", |error| = " << format_real(std::abs(tau - tau_ref)) << ")\n";
    std::cout << "theta(s) = tau*s; parallel curvatures k1 = kappa*cos(theta), k2 = kappa*sin(theta)\n";
    std::cout << "s,kappa,tau,theta,k1,k2\n";
    for (int i = 0; i < 5; ++i) {
        const double s = lo1 + (hi1 - lo1) * (i + 0.5) / 5.0;
        auto [ks, ts] = frenet_kappa_tau(helix, s, cfg);
        const double theta = ts * s;
        std::cout << format_real(s) << "," << format_real(ks) << "," << format_real(ts) << "," << format_real(theta)
                  << "," << format_real(ks * std::cos(theta)) << "," << format_real(ks * std::sin(theta)) << "\n";
    }

    // Parallel frame aligned with the zero rotation angle at s = 0: rotate
    // the Frenet normal pair at the grid start back through theta(lo).
    auto aligned_bishop_start = [&](double lo) {
        Frame fr = frenet_frame(helix, lo, cfg);  // columns T, N, B
        const double th = tau * lo;
        Eigen::MatrixXd m(3, 3);
        m.col(0) = fr.m.col(0);
        m.col(1) = std::cos(th) * fr.m.col(1) - std::sin(th) * fr.m.col(2);
        m.col(2) = std::sin(th) * fr.m.col(1) + std::cos(th) * fr.m.col(2);
        return Frame{lo, std::move(m)};
    };

    const fs::path out_dir = opt.out.empty() ? fs::path(".") : fs::path(opt.out);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "'");

    auto emit_stream = [&](int type_index, double lo, double hi, const std::string& name) {
        if (!helix.has_derivative(1)) {
            // Leave stencil room at the domain ends when differentiating.
            const double margin = 2.05 * std::max(cfg.fd_step2, cfg.fd_step);
            lo = std::max(lo, helix.s_min() + margin);
            hi = std::min(hi, helix.s_max() - margin);
        }
        auto grid = uniform_grid(lo, hi, opt.samples);
        FrameField field = rmf_double_reflection(helix, grid, aligned_bishop_start(lo), cfg);
        CurvatureField curv = rm_curvatures(field, cfg);
        RectifyingSpec spec;
        spec.n = 3;
        spec.type_index = type_index;
        spec.constants = {1.0};
        spec = derive_free_coefficient(curv, spec, cfg);
        Curve psi = construct_type_curve(field, spec);

        const std::string csv = (out_dir / (name + ".csv")).string();
        const std::string svg = (out_dir / (name + ".svg")).string();
        write_curve_csv_file(csv, psi);
        auto [ax, ay] = projection_axes(opt.project);
        write_svg_polyline_file(svg, psi, ax, ay);
        DerivativeResidualReport rep = verify_derivative_rectifying(field, spec, cfg);
        std::cout << "wrote " << csv << " and " << svg << " (type " << type_index << ", domain ["
                  << format_real(lo) << ", " << format_real(hi) << "], max |<psi',xi_1>| = "
                  << format_real(rep.max_xi1) << ")\n";
    };
    emit_stream(1, lo1, hi1, "beta1");
    emit_stream(2, lo2, hi2, "beta2");
    return 0;
}

int cmd_export(const Options& opt) {
    if (opt.input.empty()) throw UsageError("export needs --input CURVE.csv");
    Curve curve = read_curve_csv_file(opt.input);
    auto [ax, ay] = projection_axes(opt.project);
    if (std::max(ax, ay) >= curve.dim()) throw UsageError("--project axes outside the curve dimension");
    const std::string out = opt.out.empty() ? "out.svg" : opt.out;
    write_svg_polyline_file(out, curve, ax, ay);
    std::cout << "wrote " << out << " (" << curve.params().size() << " points, projection " << opt.project << ")\n";
    return 0;
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--curve", opt.curve, "builtin curve: line, circle[:r], great-circle[:r], helix, twisted-cubic");
    cmd->add_option("--input", opt.input, "sampled curve CSV (header s,x1,...,xn)");
    cmd->add_option("--dim", opt.dim, "ambient dimension for builtins that embed");
    cmd->add_option("--range", opt.range, "parameter range A:B");
    cmd->add_option("--samples", opt.samples, "grid sample count");
    cmd->add_option("--method", opt.method, "framing method: frenet, rmf-dr, rmf-ode");
    cmd->add_option("--type", opt.type_index, "rectifying type index (1..n-1)");
    cmd->add_option("--constants", opt.constants, "fixed coefficients c1,c2,...");
    cmd->add_option("--free-const", opt.free_const, "use this constant free coefficient instead of deriving it");
    cmd->add_option("--format", opt.format, "output format: csv, json, svg");
    cmd->add_option("--project", opt.project, "projection plane for SVG: xy, xz, yz");
    cmd->add_option("--out", opt.out, "output path (directory for demo-helix)");
    cmd->add_flag("--fd", opt.finite_differences, "force finite differences (ignore exact derivative evaluators)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotation minimizing frames and rectifying-type curve toolkit"};
    app.require_subcommand(1);

    Options opt;
    auto* frame = app.add_subcommand("frame", "compute a frame field along a curve");
    auto* curvature = app.add_subcommand("curvature", "compute RM curvatures (and kappa/tau/theta for frenet)");
    auto* construct = app.add_subcommand("construct", "derive the free coefficient and build a rectifying-type curve");
    auto* classify = app.add_subcommand("classify", "run every applicable curve classifier");
    auto* demo = app.add_subcommand("demo-helix", "worked circular-helix demo: constants, beta1/beta2 streams, figures");
    auto* exporter = app.add_subcommand("export", "project a curve CSV to an SVG polyline");
    for (CLI::App* cmd : {frame, curvature, construct, classify, demo, exporter}) add_common(cmd, opt);

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == 0) return app.exit(e);  // --help
            std::cerr << "usage error: " << e.what() << "\n";
            return 2;
        }
        if (frame->parsed()) return cmd_frame(opt);
        if (curvature->parsed()) return cmd_curvature(opt);
        if (construct->parsed()) return cmd_construct(opt);
        if (classify->parsed()) return cmd_classify(opt);
        if (demo->parsed()) return cmd_demo_helix(opt);
        if (exporter->parsed()) return cmd_export(opt);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
