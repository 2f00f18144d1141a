// Acceptance suite: one line per criterion, nonzero exit when any fails.
// argv[1] is the path to the rmf CLI (used by the demo and determinism
// criteria).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "rmf/classify.hpp"
#include "rmf/io.hpp"
#include "rmf/numfmt.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace rmf;
using namespace support;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;
int g_failures = 0;

void report(int index, bool pass, const std::string& text) {
    std::printf("[%d] %s  %s\n", index, pass ? "PASS" : "FAIL", text.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct CliRun {
    int exit_code = -1;
    std::string out;
    double seconds = 0.0;
};

CliRun run_cli(const std::string& args, const fs::path& dir) {
    fs::create_directories(dir);
    const fs::path out = dir / "stdout.txt";
    const std::string cmd = "cd '" + dir.string() + "' && '" + g_cli + "' " + args + " > '" + out.string() + "' 2>&1";
    const auto t0 = Clock::now();
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.seconds = seconds_since(t0);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    return r;
}

// Pulls the number after "name = " from the demo output.
double parse_reported(const std::string& text, const std::string& name) {
    const auto pos = text.find(name + " = ");
    if (pos == std::string::npos) return std::nan("");
    return std::strtod(text.c_str() + pos + name.size() + 3, nullptr);
}

fs::path scratch_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("rmf_acceptance_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// ---- criterion 1: worked-example constants from the demo ----
void criterion_1() {
    if (g_cli.empty()) {
        report(1, false, "helix demo constants: CLI path missing");
        return;
    }
    const double kappa_ref = 24.0 / 625.0, tau_ref = 7.0 / 625.0;

    CliRun analytic = run_cli("demo-helix --samples 500", scratch_dir("c1a"));
    const double ka = parse_reported(analytic.out, "kappa");
    const double ta = parse_reported(analytic.out, "tau  ");
    const double err_a = std::max(std::abs(ka - kappa_ref), std::abs(ta - tau_ref));

    CliRun fd = run_cli("demo-helix --fd --samples 500", scratch_dir("c1b"));
    const double kf = parse_reported(fd.out, "kappa");
    const double tf = parse_reported(fd.out, "tau  ");
    const double err_f = std::max(std::abs(kf - kappa_ref), std::abs(tf - tau_ref));

    const double secs = std::max(analytic.seconds, fd.seconds);
    const bool pass = analytic.exit_code == 0 && fd.exit_code == 0 && err_a < 1e-9 && err_f < 1e-6 && secs < 1.0;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "helix demo constants: analytic err %.2e (<1e-9), fd err %.2e (<1e-6), %.3f s (<1 s)", err_a, err_f,
                  secs);
    report(1, pass, buf);
}

// ---- criterion 2: parallel-frame closed forms from the frame ODE ----
void criterion_2() {
    const auto t0 = Clock::now();
    auto grid = uniform_grid(0.0, 100.0, 100001);  // step 1e-3
    CurvatureField cf;
    cf.s = grid;
    cf.k.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Vec kk(2);
        kk << helix_kappa() * std::cos(helix_theta(grid[i])), helix_kappa() * std::sin(helix_theta(grid[i]));
        cf.k[i] = kk;
    }
    FrameField field = rmf_ode(cf, helix_bishop_frame(0.0));
    double worst = 0.0;
    for (std::size_t i = 0; i < field.size(); i += 10) {
        const Frame& fr = field.frames[i];
        worst = std::max(worst, (fr.xi(2) - helix_N1(fr.s)).cwiseAbs().maxCoeff());
        worst = std::max(worst, (fr.xi(3) - helix_N2(fr.s)).cwiseAbs().maxCoeff());
    }
    const double secs = seconds_since(t0);
    const bool pass = worst < 1e-6 && secs < 5.0;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "frame ODE vs closed forms on [0,100]: max err %.2e (<1e-6), %.2f s (<5 s)", worst,
                  secs);
    report(2, pass, buf);
}

// ---- criterion 3: double reflection vs ODE converge together at 2nd order ----
void criterion_3() {
    Curve helix = helix_curve();
    auto deviation = [&](double h) {
        const int n = static_cast<int>(std::lround(10.0 / h)) + 1;
        auto grid = uniform_grid(0.0, 10.0, n);
        FrameField dr = rmf_double_reflection(helix, grid, helix_bishop_frame(0.0));
        CurvatureField cf = rm_curvatures(dr);
        FrameField ode = rmf_ode(cf, dr.frames.front());
        double worst = 0.0;
        for (std::size_t i = 0; i < dr.size(); ++i) {
            worst = std::max(worst, max_frame_angle(dr.frames[i], ode.frames[i]));
        }
        return worst;
    };
    const double coarse = deviation(1e-2);
    const double fine = deviation(5e-3);
    const double ratio = coarse / fine;
    const bool pass = ratio > 3.5 && ratio < 4.5;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "cross-validation: dev %.3e at h=1e-2, %.3e at h/2, ratio %.2f in [3.5,4.5]",
                  coarse, fine, ratio);
    report(3, pass, buf);
}

// ---- criterion 4: type-1 construction is rectifying ----
void criterion_4() {
    FrameField field = rmf_double_reflection(helix_curve(), uniform_grid(1.0, 100.0, 9901), helix_bishop_frame(1.0));
    CurvatureField curv = rm_curvatures(field);
    RectifyingSpec spec;
    spec.n = 3;
    spec.type_index = 1;
    spec.constants = {1.0};
    spec = derive_free_coefficient(curv, spec);

    double coeff_err = 0.0;
    for (std::size_t i = 0; i < curv.size(); i += 100) {
        coeff_err = std::max(coeff_err, std::abs(spec.free_coeff[i] + std::tan(helix_theta(curv.s[i]))));
    }
    DerivativeResidualReport rep = verify_derivative_rectifying(field, spec);
    Curve beta1 = construct_type_curve(field, spec);
    ReportEntry position = is_rectifying_position(beta1);

    const bool pass = coeff_err < 1e-6 && rep.max_xi1 < 1e-4 && position.residual < 1e-3;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "type-1 helix curve: |coeff+tan| %.2e, max<psi',xi1> %.2e (<1e-4), rectifying residual %.2e (<1e-3)",
                  coeff_err, rep.max_xi1, position.residual);
    report(4, pass, buf);
}

// ---- criterion 5: type-2 constant coefficient and the helix axis ----
void criterion_5() {
    auto [field, curv] = frenet_as_rmf(helix_curve(), uniform_grid(0.0, 100.0, 4001));
    RectifyingSpec spec;
    spec.n = 3;
    spec.type_index = 2;
    spec.constants = {1.0};
    spec = derive_free_coefficient(curv, spec);

    double mu_err = 0.0;
    for (double v : spec.free_coeff) mu_err = std::max(mu_err, std::abs(v - 7.0 / 24.0));
    AxisReport axis = helix_axis(field, curv, spec);
    const double axis_err = norm(axis.axis_unit - make_vec({0.0, 0.0, 1.0}));
    const double angle_err = std::abs(axis.angle_mean[1] - 0.28) + axis.angle_residual[1];

    const bool pass = mu_err < 1e-9 && axis.constancy_residual < 1e-6 && axis_err < 1e-6 && angle_err < 1e-6;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "type-2 axis: |mu-7/24| %.2e (<1e-9), U constancy %.2e (<1e-6), |<T,U>-0.28| %.2e (<1e-6)", mu_err,
                  axis.constancy_residual, angle_err);
    report(5, pass, buf);
}

// ---- criterion 6: sphere relation for circles; cylinder rejected ----
void criterion_6() {
    bool pass = true;
    std::string detail;
    char buf[160];

    auto check_circle = [&](const Curve& c, double expected_r, const std::string& name) {
        auto grid = uniform_grid(c.s_min(), c.s_max(), 8192);
        FrameField field = rmf_double_reflection(c, grid, default_initial_frame(c, grid.front()));
        CurvatureField curv = rm_curvatures(field);
        SphericalCoefficients sc = spherical_coefficients(c, field, curv);
        const double r_err = std::abs(sc.r_fit - expected_r) / expected_r;
        const bool ok = r_err < 1e-6 && sc.relation_residual < 1e-6;
        if (!ok) {
            std::snprintf(buf, sizeof(buf), " [%s r_err %.1e rel %.1e]", name.c_str(), r_err, sc.relation_residual);
            detail += buf;
        }
        pass = pass && ok;
    };

    for (double r : {1.0, 2.0, 3.0}) {
        check_circle(circle_curve(r), r, "circle:" + format_real(r));
        check_circle(great_circle_curve(r), r, "great-circle:" + format_real(r));
    }

    // Random small circle on the unit 3-sphere; the plane-centered sphere of
    // the fit carries the circle's own radius.
    {
        std::mt19937 rng(123);
        Eigen::MatrixXd q = random_rotation(rng, 4);
        Vec u = q.col(0), v = q.col(1), w = q.col(2);
        const double rho = 0.7;
        const double offset = std::sqrt(1.0 - rho * rho);
        std::vector<double> params;
        std::vector<Vec> pts;
        const int m = 8192;
        for (int i = 0; i < m; ++i) {
            const double t = 2.0 * M_PI * i / (m - 1.0);
            params.push_back(t);
            pts.push_back(offset * w + rho * (std::cos(t) * u + std::sin(t) * v));
        }
        Curve small = Curve::sampled(params, pts);
        FrameField field = rmf_double_reflection(small, params, default_initial_frame(small, params.front()));
        CurvatureField curv = rm_curvatures(field);
        SphericalCoefficients sc = spherical_coefficients(small, field, curv);
        const double r_err = std::abs(sc.r_fit - rho) / rho;
        const bool ok = r_err < 1e-6 && sc.relation_residual < 1e-6;
        if (!ok) {
            std::snprintf(buf, sizeof(buf), " [S3 circle r_err %.1e rel %.1e]", r_err, sc.relation_residual);
            detail += buf;
        }
        pass = pass && ok;
    }

    // The helix must be rejected.
    {
        Curve helix = helix_curve();
        auto grid = uniform_grid(0.0, 120.0, 4001);
        FrameField field = rmf_double_reflection(helix, grid, helix_bishop_frame(0.0));
        CurvatureField curv = rm_curvatures(field);
        SphericalCoefficients sc = spherical_coefficients(helix, field, curv);
        const double residual = std::max(sc.relation_residual, sc.distance_residual);
        if (!(residual > 1e-2)) {
            std::snprintf(buf, sizeof(buf), " [helix residual %.1e not > 1e-2]", residual);
            detail += buf;
            pass = false;
        }
    }
    report(6, pass, "sphere relation: circles/great circles r in {1,2,3} + S^3 circle pass, helix rejected" + detail);
}

// ---- criterion 7: frame invariants over 10,000 random curves ----
void criterion_7() {
    const auto t0 = Clock::now();
    std::mt19937 rng(20240809);
    double worst_ortho = 0.0, worst_det = 0.0, worst_rm = 0.0;
    const int total = 10000;
    for (int trial = 0; trial < total; ++trial) {
        const int dim = (trial % 3 == 0) ? 3 : (trial % 3 == 1 ? 4 : 6);
        Curve c = random_trig_curve(rng, dim);
        auto grid = uniform_grid(0.0, 1.0, 101);  // step 1e-2
        FrameField field = rmf_double_reflection(c, grid, default_initial_frame(c, grid.front()));

        for (const Frame& fr : field.frames) {
            worst_ortho = std::max(worst_ortho, fr.orthonormality_error());
            worst_det = std::max(worst_det, std::abs(fr.determinant() - 1.0));
        }
        for (int j = 2; j <= dim; ++j) {
            std::vector<Vec> xj(field.size());
            for (std::size_t i = 0; i < field.size(); ++i) xj[i] = field.frames[i].xi(j);
            std::vector<Vec> dxj = differentiate_samples(grid, xj);
            for (std::size_t i = 1; i + 1 < field.size(); ++i) {
                const Vec& t = field.frames[i].m.col(0);
                const Vec off = dxj[i] - t.dot(dxj[i]) * t;
                worst_rm = std::max(worst_rm, norm(off) / std::max(1.0, norm(dxj[i])));
            }
        }
    }
    const double secs = seconds_since(t0);
    const bool pass = worst_ortho < 1e-9 && worst_det < 1e-9 && worst_rm < 1e-3 && secs < 60.0;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "10000 random curves (n in {3,4,6}): ortho %.1e (<1e-9), |det-1| %.1e (<1e-9), RM %.1e (<1e-3), "
                  "%.1f s (<60 s)",
                  worst_ortho, worst_det, worst_rm, secs);
    report(7, pass, buf);
}

// ---- criterion 8: classification verdicts, stable under rigid motion ----
void criterion_8() {
    ToleranceConfig cfg;
    cfg.residual_tol = 1e-4;

    auto verdicts_of = [&](const Curve& c) {
        ClassificationReport rep = classify_all(c, cfg, 4096);
        std::string out;
        for (const auto& [name, entry] : rep.entries) {
            if (name == "rectifying-position") continue;  // finite-difference floor keeps this indeterminate
            out += name + "=" + to_string(entry.verdict) + ";";
        }
        return out;
    };

    // Synthesized curve whose torsion/curvature ratio is the arclength.
    CurvatureField cf;
    cf.s = uniform_grid(0.0, 5.0, 5001);
    cf.k.resize(cf.s.size());
    for (std::size_t i = 0; i < cf.s.size(); ++i) {
        Vec kk(2);
        kk << cf.s[i], -1.0;
        cf.k[i] = kk;
    }
    Frame initial{0.0, Eigen::MatrixXd::Identity(3, 3)};
    FrameField ff = rmf_ode(cf, initial);
    std::vector<Vec> pts(ff.size());
    Vec pos = Vec::Zero(3);
    pts[0] = pos;
    for (std::size_t i = 1; i < ff.size(); ++i) {
        pos += 0.5 * (cf.s[i] - cf.s[i - 1]) * (ff.frames[i - 1].xi(3) + ff.frames[i].xi(3));
        pts[i] = pos;
    }
    Curve chen_curve = Curve::sampled(cf.s, pts);

    const Curve helix = helix_curve();
    ClassificationReport helix_rep = classify_all(helix, cfg, 4096);
    ReportEntry chen = is_rectifying_chen(chen_curve, cfg);

    bool pass = helix_rep.entries.at("helix").verdict == Verdict::yes &&
                helix_rep.entries.at("bertrand").verdict == Verdict::yes &&
                helix_rep.entries.at("spherical").verdict == Verdict::no &&
                helix_rep.entries.at("rectifying-chen").verdict == Verdict::no && chen.verdict == Verdict::yes &&
                std::abs(chen.params[0] - 1.0) < 1e-3;

    // Verdict stability under rigid motions.
    std::mt19937 rng(31);
    const std::string helix_base = verdicts_of(helix);
    const std::string chen_base = verdicts_of(chen_curve);
    for (int trial = 0; trial < 2 && pass; ++trial) {
        Eigen::MatrixXd rot = random_rotation(rng, 3);
        Vec shift = make_vec({3.5, -2.0 + trial, 9.0});
        pass = pass && verdicts_of(rigid_motion(helix, rot, shift)) == helix_base;
        pass = pass && verdicts_of(rigid_motion(chen_curve, rot, shift)) == chen_base;
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "classification: helix {helix,bertrand}=yes {spherical,chen}=no, synthetic ratio slope %.5f, "
                  "verdicts rigid-motion stable",
                  chen.params.empty() ? 0.0 : chen.params[0]);
    report(8, pass, buf);
}

// ---- criterion 9: every CLI command is byte-deterministic ----
void criterion_9() {
    if (g_cli.empty()) {
        report(9, false, "determinism: CLI path missing");
        return;
    }
    const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
        {"demo-helix --samples 600", {"stdout.txt", "beta1.csv", "beta1.svg", "beta2.csv", "beta2.svg"}},
        {"frame --curve helix --samples 400 --method rmf-dr --out frames.json",
         {"stdout.txt", "frames.json", "frames.curvatures.csv"}},
        {"frame --curve helix --samples 400 --method rmf-ode --out frames.json",
         {"stdout.txt", "frames.json", "frames.curvatures.csv"}},
        {"frame --curve helix --samples 400 --method frenet --out frames.json", {"stdout.txt", "frames.json"}},
        {"curvature --curve great-circle --samples 512 --out k.csv", {"stdout.txt", "k.csv"}},
        {"construct --curve helix --method frenet --type 2 --constants 1 --samples 600 --out gamma.csv",
         {"stdout.txt", "gamma.csv", "gamma.report.json"}},
        {"classify --curve helix --samples 1024 --out report.json", {"stdout.txt", "report.json"}},
    };
    bool pass = true;
    std::string detail;
    int index = 0;
    for (const auto& [args, files] : commands) {
        fs::path a = scratch_dir("c9a_" + std::to_string(index));
        fs::path b = scratch_dir("c9b_" + std::to_string(index));
        ++index;
        CliRun ra = run_cli(args, a);
        CliRun rb = run_cli(args, b);
        if (ra.exit_code != 0 || rb.exit_code != 0) {
            pass = false;
            detail += " [" + args + ": nonzero exit]";
            continue;
        }
        for (const std::string& f : files) {
            if (slurp(a / f) != slurp(b / f) || slurp(a / f).empty()) {
                pass = false;
                detail += " [" + args + ": " + f + " differs]";
            }
        }
    }
    // export on a fixed input
    {
        fs::path a = scratch_dir("c9a_export");
        fs::path b = scratch_dir("c9b_export");
        CliRun pa = run_cli("demo-helix --samples 300", a);
        CliRun pb = run_cli("demo-helix --samples 300", b);
        CliRun ea = run_cli("export --input beta1.csv --project xz --out fig.svg", a);
        CliRun eb = run_cli("export --input beta1.csv --project xz --out fig.svg", b);
        if (pa.exit_code || pb.exit_code || ea.exit_code || eb.exit_code || slurp(a / "fig.svg") != slurp(b / "fig.svg") ||
            slurp(a / "fig.svg").empty()) {
            pass = false;
            detail += " [export differs]";
        }
    }
    report(9, pass, "determinism: repeated runs of every command are byte-identical" + detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures == 0) {
        std::printf("all 9 criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
