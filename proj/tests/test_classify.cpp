#include <doctest.h>

#include <random>

#include "rmf/classify.hpp"
#include "test_support.hpp"

using namespace rmf;
using namespace support;

TEST_CASE("chen: synthesized tau/kappa = s curve is rectifying with slope 1") {
    Curve c = synthesize_from_kappa_tau([](double) { return 1.0; }, [](double s) { return s; }, 0.0, 5.0, 5001);
    ToleranceConfig cfg;
    cfg.residual_tol = 1e-4;  // finite-difference floor on sampled data
    ReportEntry entry = is_rectifying_chen(c, cfg);
    CHECK(entry.verdict == Verdict::yes);
    CHECK(entry.params[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(entry.params[1]) < 1e-3);
}

TEST_CASE("chen: the circular helix has a constant ratio, hence not rectifying") {
    ReportEntry entry = is_rectifying_chen(helix_curve());
    CHECK(entry.verdict == Verdict::no);
    CHECK(std::abs(entry.params[0]) < 1e-9);  // slope
    CHECK(entry.params[1] == doctest::Approx(7.0 / 24.0).epsilon(1e-9));
}

TEST_CASE("chen: planar curves have tau = 0, constant ratio, not rectifying") {
    ReportEntry entry = is_rectifying_chen(circle_curve(2.0));
    CHECK(entry.verdict == Verdict::no);
    CHECK(std::abs(entry.params[0]) < 1e-9);
}

TEST_CASE("position test: straight line has no principal normal") {
    CHECK_THROWS_AS(is_rectifying_position(line_curve(3, 10.0), {}), DegeneracyError);
}

TEST_CASE("position test: helix beta_1 stays in its rectifying plane") {
    FrameField field = rmf_double_reflection(helix_curve(), uniform_grid(1.0, 100.0, 9901), helix_bishop_frame(1.0));
    CurvatureField curv = rm_curvatures(field);
    RectifyingSpec spec;
    spec.n = 3;
    spec.type_index = 1;
    spec.constants = {1.0};
    spec = derive_free_coefficient(curv, spec);
    Curve beta1 = construct_type_curve(field, spec);
    ReportEntry entry = is_rectifying_position(beta1);
    CHECK(entry.residual < 1e-3);
}

TEST_CASE("position test: origin-centered circle is anti-rectifying (residual ~ 1)") {
    ReportEntry entry = is_rectifying_position(circle_curve(1.0));
    CHECK(entry.verdict == Verdict::no);
    CHECK(entry.residual == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("myller decomposition: true rectifying-type data passes, a drift term fails") {
    // Frenet-type frame of the helix with closed-form derivatives. With
    // r = lambda xi_1 + mu xi_3, the decomposition identities hold exactly.
    auto grid = uniform_grid(0.0, 40.0, 4001);
    const double kappa = helix_kappa(), tau = helix_tau();
    auto lambda = [](double s) { return 0.5 + 0.1 * s; };
    auto dlambda = [](double) { return 0.1; };
    auto mu = [](double s) { return 1.0 + std::sin(0.05 * s); };
    auto dmu = [](double s) { return 0.05 * std::cos(0.05 * s); };

    MyllerSamples ok, drift;
    for (double s : grid) {
        // a1 = lambda', a2 = lambda kappa - mu tau, a3 = mu' in the Frenet frame.
        ok.s.push_back(s);
        ok.a1.push_back(dlambda(s));
        ok.a2.push_back(lambda(s) * kappa - mu(s) * tau);
        ok.a3.push_back(dmu(s));
        ok.r_xi1.push_back(lambda(s));
        ok.r_xi3.push_back(mu(s));

        // Add a xi_2 drift: r = lambda xi_1 + 0.2 s xi_2 + mu xi_3. Then
        // d/ds<r, xi_1> = lambda' - 0.2 s kappa != a1.
        drift.s.push_back(s);
        drift.a1.push_back(dlambda(s) - 0.2 * s * kappa);
        drift.a2.push_back(0.2 + lambda(s) * kappa - mu(s) * tau);
        drift.a3.push_back(dmu(s) + 0.2 * s * tau);
        drift.r_xi1.push_back(lambda(s));
        drift.r_xi3.push_back(mu(s));
    }
    ReportEntry good = is_rectifying_type_myller(ok, {});
    CHECK(good.residual < 1e-5);
    CHECK(good.verdict != Verdict::no);
    CHECK(!good.degenerate);

    ReportEntry bad = is_rectifying_type_myller(drift, {});
    CHECK(bad.params[0] > 1e-2);  // the xi_1 identity breaks
    CHECK(bad.verdict == Verdict::no);
}

TEST_CASE("myller decomposition: the zero curve is a flagged degenerate yes") {
    MyllerSamples zero;
    zero.s = uniform_grid(0.0, 1.0, 11);
    zero.a1.assign(11, 0.0);
    zero.a2.assign(11, 0.0);
    zero.a3.assign(11, 0.0);
    zero.r_xi1.assign(11, 0.0);
    zero.r_xi3.assign(11, 0.0);
    ReportEntry entry = is_rectifying_type_myller(zero, {});
    CHECK(entry.verdict == Verdict::yes);
    CHECK(entry.degenerate);
}

TEST_CASE("helix test: the worked helix has axis e_z and angle cosine 0.28") {
    ReportEntry entry = is_helix(helix_curve());
    CHECK(entry.verdict == Verdict::yes);
    REQUIRE(entry.params.size() == 4);
    CHECK(std::abs(entry.params[0]) < 1e-9);
    CHECK(std::abs(entry.params[1]) < 1e-9);
    CHECK(entry.params[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entry.params[3] == doctest::Approx(0.28).epsilon(1e-9));
    CHECK(!entry.degenerate);
}

TEST_CASE("helix test: a straight line is a degenerate yes with angle 0") {
    ReportEntry entry = is_helix(line_curve(3, 10.0));
    CHECK(entry.verdict == Verdict::yes);
    CHECK(entry.degenerate);
    CHECK(entry.params.back() == doctest::Approx(1.0).epsilon(1e-9));  // cos 0
}

TEST_CASE("helix test: the twisted cubic is not a helix") {
    ReportEntry entry = is_helix(twisted_cubic_curve());
    CHECK(entry.verdict == Verdict::no);
    CHECK(entry.residual > 1e-2);
}

TEST_CASE("spherical test: great circle of radius 3") {
    Curve gc = great_circle_curve(3.0);
    auto grid = uniform_grid(0.0, 2.0 * M_PI, 8192);
    FrameField field = rmf_double_reflection(gc, grid, default_initial_frame(gc, 0.0));
    CurvatureField curv = rm_curvatures(field);
    ReportEntry entry = is_spherical(gc, field, curv);
    CHECK(entry.verdict == Verdict::yes);
    // params: center (3), r, a1, a2
    CHECK(std::abs(entry.params[0]) < 1e-7);
    CHECK(entry.params[3] == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("spherical test: the helix lies on a cylinder, not a sphere") {
    Curve helix = helix_curve();
    auto grid = uniform_grid(0.0, 120.0, 4001);
    FrameField field = rmf_double_reflection(helix, grid, helix_bishop_frame(0.0));
    CurvatureField curv = rm_curvatures(field);
    ReportEntry entry = is_spherical(helix, field, curv);
    CHECK(entry.verdict == Verdict::no);
    CHECK(entry.residual > 1e-2);
}

TEST_CASE("spherical test: planar circle passes with the plane-centered sphere") {
    Curve circle = circle_curve(2.5);
    auto grid = uniform_grid(0.0, 2.0 * M_PI, 8192);
    FrameField field = rmf_double_reflection(circle, grid, default_initial_frame(circle, 0.0));
    CurvatureField curv = rm_curvatures(field);
    ReportEntry entry = is_spherical(circle, field, curv);
    CHECK(entry.verdict == Verdict::yes);
    CHECK(entry.params[3] == doctest::Approx(2.5).epsilon(1e-7));
    CHECK(entry.note.find("under-determined") != std::string::npos);
}

TEST_CASE("bertrand: exact affine relation recovers the minimum-norm coefficients") {
    // Data on the affine line 2 tau - 3 (-kappa)... i.e. a=2, b=3 satisfies
    // a tau - b kappa + 1 = 0; generate (kappa, tau) accordingly and check
    // recovery. Oracle: tau = (3 kappa - 1)/2.
    CurvatureField cf;
    cf.s = uniform_grid(0.0, 1.0, 101);
    for (double s : cf.s) {
        const double kappa = 1.0 + 0.5 * std::sin(3.0 * s);
        const double tau = (3.0 * kappa - 1.0) / 2.0;
        cf.kappa.push_back(kappa);
        cf.tau.push_back(tau);
        Vec kk(2);
        kk << tau, -kappa;
        cf.k.push_back(kk);
    }
    ReportEntry entry = is_bertrand(cf, {});
    CHECK(entry.verdict == Verdict::yes);
    CHECK(entry.params[0] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(entry.params[1] == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(entry.residual < 1e-10);
}

TEST_CASE("bertrand: the circular helix is Bertrand (constant kappa, tau)") {
    CurvatureField cf;
    cf.s = uniform_grid(0.0, 10.0, 11);
    for (std::size_t i = 0; i < cf.s.size(); ++i) {
        cf.kappa.push_back(helix_kappa());
        cf.tau.push_back(helix_tau());
        Vec kk(2);
        kk << helix_tau(), -helix_kappa();
        cf.k.push_back(kk);
    }
    ReportEntry entry = is_bertrand(cf, {});
    CHECK(entry.verdict == Verdict::yes);
    // Minimum-norm solution of a*7/625 - b*24/625 + 1 = 0 is (-7, 24).
    CHECK(entry.params[0] == doctest::Approx(-7.0).epsilon(1e-9));
    CHECK(entry.params[1] == doctest::Approx(24.0).epsilon(1e-9));
}

TEST_CASE("bertrand: planar circles are Bertrand with b = 1/kappa; lines are errors") {
    CurvatureField circle;
    circle.s = uniform_grid(0.0, 1.0, 5);
    for (std::size_t i = 0; i < circle.s.size(); ++i) {
        circle.kappa.push_back(1.0);
        circle.tau.push_back(0.0);
        Vec kk(2);
        kk << 0.0, -1.0;
        circle.k.push_back(kk);
    }
    ReportEntry entry = is_bertrand(circle, {});
    CHECK(entry.verdict == Verdict::yes);
    CHECK(std::abs(entry.params[0]) < 1e-12);
    CHECK(entry.params[1] == doctest::Approx(1.0).epsilon(1e-12));

    CurvatureField line;
    line.s = circle.s;
    line.kappa.assign(5, 0.0);
    line.tau.assign(5, 0.0);
    Vec zero2 = Vec::Zero(2);
    line.k.assign(5, zero2);
    CHECK_THROWS_AS(is_bertrand(line, {}), DegeneracyError);
}

TEST_CASE("bertrand: generic (kappa, tau) pairs on no affine line fail") {
    CurvatureField cf;
    cf.s = uniform_grid(0.0, 6.0, 301);
    for (double s : cf.s) {
        const double kappa = 1.0 + 0.5 * std::sin(s);
        const double tau = std::cos(2.0 * s);
        cf.kappa.push_back(kappa);
        cf.tau.push_back(tau);
        Vec kk(2);
        kk << tau, -kappa;
        cf.k.push_back(kk);
    }
    ReportEntry entry = is_bertrand(cf, {});
    CHECK(entry.verdict == Verdict::no);
    CHECK(entry.residual > 1e-3);
}

TEST_CASE("verdicts: monotone in the tolerance, never flipping no to yes") {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double residual = std::pow(10.0, -12.0 * u(rng));
        const double tol_big = std::pow(10.0, -9.0 * u(rng));
        const double tol_small = tol_big * std::pow(10.0, -3.0 * u(rng));
        Verdict big = verdict_from_residual(residual, tol_big);
        Verdict small = verdict_from_residual(residual, tol_small);
        if (big == Verdict::no) CHECK(small == Verdict::no);
        if (big == Verdict::indeterminate) CHECK(small != Verdict::yes);
    }
}

TEST_CASE("helix verdict and residual are invariant under rigid motions") {
    std::mt19937 rng(77);
    ReportEntry base = is_helix(helix_curve());
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd rot = random_rotation(rng, 3);
        Vec shift = make_vec({10.0 * (rng() % 100) / 100.0, -3.0, 2.0});
        Curve moved = rigid_motion(helix_curve(), rot, shift);
        ReportEntry entry = is_helix(moved);
        CHECK(entry.verdict == base.verdict);
        CHECK(entry.residual == doctest::Approx(base.residual).epsilon(1e-9));
        // The fitted axis transforms covariantly.
        Vec axis_base(3), axis_moved(3);
        for (int i = 0; i < 3; ++i) {
            axis_base[i] = base.params[i];
            axis_moved[i] = entry.params[i];
        }
        CHECK(norm(rot * axis_base - axis_moved) < 1e-6);
    }
}

TEST_CASE("cross-theorem chain: constant derived coefficient makes integral curves helices") {
    // frenet-as-rmf helix basis, type 2: mu = tau/kappa is constant, so the
    // normal integral curves must classify as helices around the same axis.
    auto [field, curv] = frenet_as_rmf(helix_curve(), uniform_grid(0.0, 100.0, 4001));
    RectifyingSpec spec;
    spec.n = 3;
    spec.type_index = 2;
    spec.constants = {1.0};
    spec = derive_free_coefficient(curv, spec);
    AxisReport axis = helix_axis(field, curv, spec);

    for (int slot = 2; slot <= 3; ++slot) {
        std::vector<Vec> pts(field.size());
        Vec pos = Vec::Zero(3);
        pts[0] = pos;
        for (std::size_t i = 1; i < field.size(); ++i) {
            const double h = curv.s[i] - curv.s[i - 1];
            pos += 0.5 * h * (field.frames[i - 1].xi(slot) + field.frames[i].xi(slot));
            pts[i] = pos;
        }
        Curve integral = Curve::sampled(curv.s, std::move(pts));
        ReportEntry entry = is_helix(integral, {}, 0);
        CHECK(entry.verdict == Verdict::yes);
        Vec fitted(3);
        for (int i = 0; i < 3; ++i) fitted[i] = entry.params[i];
        CHECK(std::min(norm(fitted - axis.axis_unit), norm(fitted + axis.axis_unit)) < 1e-6);
    }
}

TEST_CASE("classify_all: helix bundle of verdicts") {
    ToleranceConfig cfg;
    cfg.residual_tol = 1e-4;
    ClassificationReport report = classify_all(helix_curve(), cfg, 4096);
    CHECK(report.entries.at("helix").verdict == Verdict::yes);
    CHECK(report.entries.at("bertrand").verdict == Verdict::yes);
    CHECK(report.entries.at("spherical").verdict == Verdict::no);
    CHECK(report.entries.at("rectifying-chen").verdict == Verdict::no);
}

TEST_CASE("classify_all: great circle is spherical with r = 1") {
    ClassificationReport report = classify_all(great_circle_curve(1.0), {}, 8192);
    const ReportEntry& sph = report.entries.at("spherical");
    CHECK(sph.verdict == Verdict::yes);
    CHECK(sph.params[3] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("classify_all: straight line reports degenerate entries instead of throwing") {
    ClassificationReport report = classify_all(line_curve(3, 10.0), {}, 64);
    CHECK(report.entries.at("helix").verdict == Verdict::yes);
    CHECK(report.entries.at("helix").degenerate);
    CHECK(report.entries.at("rectifying-chen").degenerate);  // not evaluated
    CHECK(report.entries.at("bertrand").degenerate);
}
