#include <doctest.h>

#include <cmath>

#include "fluxgraph/models.hpp"
#include "fluxgraph/rng.hpp"
#include "oracles.hpp"

using namespace fluxgraph;

namespace {

Mat scalar(double v) {
    Mat m(1, 1);
    m(0, 0) = v;
    return m;
}

std::vector<ConstitutiveModel> all_builtins() {
    std::vector<ConstitutiveModel> models;
    for (const auto& id : builtin_ids()) models.push_back(parse_model_id(id));
    return models;
}

std::vector<ConstitutiveModel> scalar_builtins() {
    std::vector<ConstitutiveModel> out;
    for (auto& m : all_builtins())
        if (m.N == 1 && m.d == 1) out.push_back(std::move(m));
    return out;
}

}  // namespace

TEST_CASE("every built-in vanishes exactly at the origin") {
    auto models = all_builtins();
    for (const auto& id : negative_control_ids()) models.push_back(parse_model_id(id));
    for (const auto& m : models) {
        const Mat zero = Mat::Zero(m.N, m.d);
        const Mat g = m.eval(zero, zero);
        INFO(m.name);
        CHECK(g.norm() == 0.0);
    }
}

TEST_CASE("pointwise residual values") {
    const auto lin = parse_model_id("linear");
    CHECK(eval_residual(lin, TensorPair(scalar(1.0), scalar(0.5)))(0, 0) == doctest::Approx(0.5));

    // Activation threshold exactly compensated: (2-1)*2/2 - 1 = 0.
    const auto af = parse_model_id("activated-flux:sigma=1");
    CHECK(eval_residual(af, TensorPair(scalar(2.0), scalar(1.0)))(0, 0) == doctest::Approx(0.0));

    // Point on the riser: max{1, 1/0.5} * 0.5 = 1.
    const auto sr = parse_model_id("step-riser");
    CHECK(eval_residual(sr, TensorPair(scalar(1.0), scalar(0.5)))(0, 0) ==
          doctest::Approx(0.0).epsilon(1e-14));
    // Interior riser point at d = 0: any |j| <= 1 satisfies the relation.
    CHECK(eval_residual(sr, TensorPair(scalar(0.73), scalar(0.0)))(0, 0) ==
          doctest::Approx(0.0).epsilon(1e-14));

    // Exponent (p-2)/2 = 0 collapses to the identity relation.
    const auto rps = parse_model_id("regpow-sq:p=2");
    CHECK(eval_residual(rps, TensorPair(scalar(3.0), scalar(1.0)))(0, 0) == doctest::Approx(2.0));

    // |j|^{p'-2} j = 2*2 = 4 at p' = 3.
    const auto pli = parse_model_id("powerlaw-inv:p=1.5");
    CHECK(eval_residual(pli, TensorPair(scalar(2.0), scalar(4.0)))(0, 0) ==
          doctest::Approx(0.0).epsilon(1e-14));

    // Staircase passes through (j, d) = (1, 0).
    const auto zz = parse_model_id("zigzag");
    CHECK(eval_residual(zz, TensorPair(scalar(1.0), scalar(0.0)))(0, 0) ==
          doctest::Approx(0.0).epsilon(1e-14));

    CHECK_THROWS_AS(eval_residual(lin, TensorPair(Mat::Zero(2, 1), Mat::Zero(2, 1))),
                    DimensionError);
}

TEST_CASE("parameter domain is enforced") {
    CHECK_THROWS_AS(parse_model_id("powerlaw:p=1"), ParameterError);
    CHECK_THROWS_AS(parse_model_id("powerlaw:p=0.5"), ParameterError);
    CHECK_THROWS_AS(parse_model_id("activated-flux:sigma=0"), ParameterError);
    CHECK_THROWS_AS(parse_model_id("activated-grad:delta=-1"), ParameterError);
    CHECK_THROWS_AS(parse_model_id("maxwell-stefan:n=2,u1=0.7,u2=0.7"), ParameterError);
    CHECK_THROWS_AS(parse_model_id("no-such-model"), ParameterError);
    CHECK_THROWS_AS(parse_model_id("linear:bogus=1"), ParameterError);
    CHECK_THROWS_AS(parse_model_id("powerlaw:p=abc"), ParameterError);
}

TEST_CASE("analytic Jacobians: closed forms") {
    const auto lin = parse_model_id("linear");
    const auto [gj, gd] = jacobians(lin, TensorPair(scalar(0.3), scalar(-0.2)));
    CHECK(gj(0, 0) == doctest::Approx(1.0));
    CHECK(gd(0, 0) == doctest::Approx(-1.0));

    // Inverse regularized power law at p = 3 (p' = 1.5), scalar point.
    const double pp = 1.5, j = 0.7;
    const auto a2 = parse_model_id("regpow-sq-inv:p=3");
    const auto [aj, ad] = jacobians(a2, TensorPair(scalar(j), scalar(1.0)));
    const double expected = std::pow(1.0 + j * j, (pp - 2.0) / 2.0) +
                            (pp - 2.0) * std::pow(1.0 + j * j, (pp - 4.0) / 2.0) * j * j;
    CHECK(aj(0, 0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(ad(0, 0) == doctest::Approx(-1.0));

    // Inactive region of the activated-flux law.
    const auto af = parse_model_id("activated-flux:sigma=1");
    const auto [fj, fd] = jacobians(af, TensorPair(scalar(0.4), scalar(0.0)));
    CHECK(fj(0, 0) == doctest::Approx(0.0));
    CHECK(fd(0, 0) == doctest::Approx(-1.0));
}

TEST_CASE("analytic Jacobians agree with finite differences away from kinks") {
    for (const auto& m : all_builtins()) {
        if (!m.has_analytic_jacobians()) continue;
        Rng rng(7);
        int tested = 0;
        while (tested < 100) {
            const Mat J = rng.log_radius(1e-1, 1e1) * rng.unit_direction(m.N, m.d);
            const Mat D = rng.log_radius(1e-1, 1e1) * rng.unit_direction(m.N, m.d);
            if (m.kink_dist(J, D) < 1e-3) continue;
            ++tested;
            const auto [gj, gd] = jacobians(m, TensorPair(J, D));
            const Mat fj = fd_jacobian_J(m, J, D);
            const Mat fd = fd_jacobian_D(m, J, D);
            const double scale_j = std::max(1.0, gj.norm());
            const double scale_d = std::max(1.0, gd.norm());
            INFO(m.name << " J=" << J << " D=" << D);
            CHECK((gj - fj).norm() / scale_j < 1e-5);
            CHECK((gd - fd).norm() / scale_d < 1e-5);
        }
    }
}

TEST_CASE("null curve bisection oracle") {
    const auto lin = parse_model_id("linear");
    auto curve = null_curve_scalar(lin, {0.7}, -10.0, 10.0);
    CHECK(curve[0].first == doctest::Approx(0.7).epsilon(1e-12));

    const auto sr = parse_model_id("step-riser");
    curve = null_curve_scalar(sr, {2.0}, -10.0, 10.0);
    CHECK(curve[0].first == doctest::Approx(2.0).epsilon(1e-10));

    // Inverting the activated-gradient law: j = 1 is reached at d = 2.
    const auto ag = parse_model_id("activated-grad:delta=1");
    curve = null_curve_scalar(ag, {2.0}, -10.0, 10.0);
    CHECK(curve[0].first == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(null_curve_scalar(ag, {0.0}, 0.5, 10.0), BracketError);
    CHECK_THROWS_AS(
        null_curve_scalar(parse_model_id("maxwell-stefan:n=2"), {0.0}, -1.0, 1.0),
        DimensionError);
}

TEST_CASE("sampled null points are pairwise monotone") {
    for (const auto& m : scalar_builtins()) {
        std::vector<double> ds;
        for (int i = 0; i < 100; ++i) ds.push_back(-5.0 + 10.0 * i / 99.0);
        const auto pts = null_curve_scalar(m, ds, -400.0, 400.0);  // covers cubic growth
        double worst = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t k = i + 1; k < pts.size(); ++k)
                worst = std::min(worst, (pts[i].first - pts[k].first) *
                                            (pts[i].second - pts[k].second));
        INFO(m.name);
        CHECK(worst >= -1e-10);
    }
}

TEST_CASE("explicit and inverse power laws share their null set") {
    const double p = 3.0;
    const auto fwd = parse_model_id("powerlaw:p=3");
    const auto inv = parse_model_id("powerlaw-inv:p=3");
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const double d = rng.uniform(-3.0, 3.0);
        // Forward map, then the inverse map takes the flux back to the input.
        const double j = std::pow(std::abs(d), p - 2.0) * d;
        const double back = std::pow(std::abs(j), p / (p - 1.0) - 2.0) * j;
        CHECK(back == doctest::Approx(d).epsilon(1e-8));
        // Both residuals vanish on the shared null point.
        CHECK(std::abs(oracles::scalar_residual(fwd, j, d)) < 1e-10);
        CHECK(std::abs(oracles::scalar_residual(inv, j, d)) < 1e-10);
    }
}

TEST_CASE("Maxwell-Stefan matrix algebra") {
    Mat A(2, 2);
    A << 0.0, 1.0, 1.0, 0.0;
    Vec u(2);
    u << 0.5, 0.5;
    const auto res = maxwell_stefan_B(A, u);
    CHECK(res.B(0, 0) == doctest::Approx(0.5));
    CHECK(res.B(0, 1) == doctest::Approx(-0.5));
    CHECK(res.B(1, 0) == doctest::Approx(-0.5));
    CHECK(res.B(1, 1) == doctest::Approx(0.5));
    CHECK(res.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(res.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));

    // Constant columns lie in the kernel for symmetric A and equal weights.
    Vec ones = Vec::Ones(2);
    CHECK((res.B * ones).norm() < 1e-14);

    Vec bad(2);
    bad << 0.5, 0.6;
    CHECK_THROWS_AS(maxwell_stefan_B(A, bad), ParameterError);
}

TEST_CASE("Maxwell-Stefan spectrum is nonnegative for any valid input") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform(0.0, 3.0));
        Mat A = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) A(i, j) = A(j, i) = rng.uniform(0.1, 3.0);
        Vec u(n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            u[i] = rng.uniform(0.1, 1.0);
            sum += u[i];
        }
        u /= sum;
        u[n - 1] = 1.0 - (u.sum() - u[n - 1]);  // exact unit sum
        const auto res = maxwell_stefan_B(A, u);
        CHECK(res.eigenvalues[0] >= -1e-10);
        // The mole-fraction vector itself spans the kernel.
        CHECK((res.B * u).norm() < 1e-12);
    }
}

TEST_CASE("vector and system shapes keep their Jacobian flattening straight") {
    Rng rng(13);
    // Vector-valued laws (1 x d) and a genuine system (N x d).
    for (const char* id : {"activated-flux:sigma=1,d=3", "regpow-sq:p=3,d=2",
                           "maxwell-stefan:n=3,a=1,d=2"}) {
        const auto m = parse_model_id(id);
        CHECK(m.eval(Mat::Zero(m.N, m.d), Mat::Zero(m.N, m.d)).norm() == 0.0);
        int tested = 0;
        while (tested < 25) {
            const Mat J = rng.log_radius(1e-1, 1e1) * rng.unit_direction(m.N, m.d);
            const Mat D = rng.log_radius(1e-1, 1e1) * rng.unit_direction(m.N, m.d);
            if (m.kink_dist(J, D) < 1e-3) continue;
            ++tested;
            const auto [gj, gd] = jacobians(m, TensorPair(J, D));
            REQUIRE(gj.rows() == m.N * m.d);
            const Mat fj = fd_jacobian_J(m, J, D);
            const Mat fd = fd_jacobian_D(m, J, D);
            INFO(id);
            CHECK((gj - fj).norm() / std::max(1.0, gj.norm()) < 1e-5);
            CHECK((gd - fd).norm() / std::max(1.0, gd.norm()) < 1e-5);
        }
    }
}

TEST_CASE("negation preserves the null set and flips the Jacobians") {
    const auto m = parse_model_id("activated-flux:sigma=1");
    const auto neg = negate(m);
    const TensorPair pt(scalar(2.0), scalar(1.0));
    CHECK(eval_residual(neg, pt).norm() == doctest::Approx(0.0));
    const auto [gj, gd] = jacobians(m, TensorPair(scalar(3.0), scalar(0.4)));
    const auto [nj, nd] = jacobians(neg, TensorPair(scalar(3.0), scalar(0.4)));
    CHECK((gj + nj).norm() == doctest::Approx(0.0));
    CHECK((gd + nd).norm() == doctest::Approx(0.0));
}

TEST_CASE("attached coercivity constants hold on sampled null points") {
    for (const auto& m : scalar_builtins()) {
        if (m.coercivity_c1 < 0.0) continue;
        std::vector<double> ds;
        for (int i = 0; i < 200; ++i) ds.push_back(-6.0 + 12.0 * i / 199.0);
        const auto pts = null_curve_scalar(m, ds, -500.0, 500.0);
        const double pp = m.p / (m.p - 1.0);
        for (const auto& [j, d] : pts) {
            const double lhs = j * d;
            const double rhs = m.coercivity_c1 * (std::pow(std::abs(j), pp) +
                                                  std::pow(std::abs(d), m.p)) -
                               m.coercivity_c2;
            INFO(m.name << " j=" << j << " d=" << d);
            CHECK(lhs >= rhs - 1e-9 * (1.0 + std::abs(lhs)));
        }
    }
}
