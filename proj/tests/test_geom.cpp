#include "wr/errors.hpp"
#include "wr/geom.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <json.hpp>

using namespace wr;

namespace {

// polar-plane metric without closed-form derivatives, to exercise the FD path
MetricChart polar_fd_only() {
    MetricChart m;
    m.chart = Chart::box({0.5, 0.0}, {4.0, 2.0 * M_PI});
    m.chart.set_periodic(1, 2.0 * M_PI);
    m.g = [](const Point& p) { return Mat(2, 2, {1.0, 0.0, 0.0, p[0] * p[0]}); };
    m.name = "polar_fd";
    return m;
}

MetricChart polar_symbolic() {
    Chart c = Chart::box({0.5, 0.0}, {4.0, 2.0 * M_PI});
    c.set_periodic(1, 2.0 * M_PI);
    return metric_from_exprs(c, {"1", "0", "0", "r^2"}, {"r", "theta"}, "polar");
}

MetricChart sphere_chart() {
    Chart c = Chart::box({0.1, 0.0}, {M_PI - 0.1, 2.0 * M_PI});
    c.set_periodic(1, 2.0 * M_PI);
    return metric_from_exprs(c, {"1", "0", "0", "sin(theta)^2"}, {"theta", "phi"}, "sphere");
}

double gamma_at(const std::vector<double>& g, int n, int k, int i, int j) {
    return g[static_cast<size_t>((k * n + i) * n + j)];
}

} // namespace

TEST_CASE("christoffel: euclidean metric vanishes") {
    const MetricChart m = euclidean_metric(2, {-3, -3}, {3, 3});
    const auto g = christoffel(m, {0.3, -1.2});
    for (double v : g) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("christoffel: polar metric against the symbolic oracle") {
    const Point p{2.0, 1.0};
    const auto expected = oracle::christoffel({"1", "0", "0", "r^2"}, {"r", "theta"}, p);
    // frozen from the oracle: Gamma^r_tt = -2, Gamma^t_rt = 1/2
    CHECK(expected[(0 * 2 + 1) * 2 + 1] == doctest::Approx(-2.0));
    CHECK(expected[(1 * 2 + 0) * 2 + 1] == doctest::Approx(0.5));

    for (const MetricChart& m : {polar_fd_only(), polar_symbolic()}) {
        const auto got = christoffel(m, p);
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(gamma_at(got, 2, k, i, j) ==
                          doctest::Approx(expected[static_cast<size_t>((k * 2 + i) * 2 + j)]).epsilon(1e-7));
    }
}

TEST_CASE("christoffel: round sphere at theta = pi/3") {
    const Point p{M_PI / 3.0, 0.7};
    const auto expected = oracle::christoffel({"1", "0", "0", "sin(theta)^2"}, {"theta", "phi"}, p);
    CHECK(expected[(0 * 2 + 1) * 2 + 1] == doctest::Approx(-std::sin(M_PI / 3) * std::cos(M_PI / 3)));
    const auto got = christoffel(sphere_chart(), p);
    for (size_t t = 0; t < got.size(); ++t) CHECK(got[t] == doctest::Approx(expected[t]).epsilon(1e-8));
}

TEST_CASE("christoffel: symmetry in the lower pair is exact") {
    const auto g = christoffel(sphere_chart(), {1.1, 0.3});
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(gamma_at(g, 2, k, i, j) == gamma_at(g, 2, k, j, i));
}

TEST_CASE("christoffel: margin and degeneracy errors") {
    const MetricChart m = polar_fd_only();
    CHECK_THROWS_AS((void)christoffel(m, {0.50005, 1.0}), MarginError);
    MetricChart sing;
    sing.chart = Chart::box({-1.0}, {1.0});
    sing.g = [](const Point&) { return Mat(1, 1, {0.0}); };
    CHECK_THROWS_AS((void)christoffel(sing, {0.0}), DegeneracyError);
}

TEST_CASE("hess_scalar: flat plane, w = x^2") {
    const MetricChart m = euclidean_metric(2, {-3, -3}, {3, 3});
    const ScalarField w = field_from_expr("x^2", {"x", "y"});
    const Mat h = hess_scalar(m, w, {0.4, 0.9});
    CHECK(h(0, 0) == doctest::Approx(2.0));
    CHECK(std::abs(h(0, 1)) < 1e-10);
    CHECK(std::abs(h(1, 1)) < 1e-10);
}

TEST_CASE("hess_scalar: sphere zonal function satisfies Hess w = -w g") {
    const MetricChart m = sphere_chart();
    const ScalarField w = field_from_expr("cos(theta)", {"theta", "phi"});
    for (const Point& p : {Point{0.7, 0.3}, Point{M_PI / 2, 2.0}, Point{2.2, 5.5}}) {
        const Mat h = hess_scalar(m, w, p);
        const Mat target = m.g(p).scaled(-w.eval(p));
        CHECK((h - target).max_abs() < 1e-9);
    }
}

TEST_CASE("hess_scalar: real line, w = cosh equals w g") {
    const MetricChart m = euclidean_metric(1, {-3}, {3});
    const ScalarField w = field_from_expr("cosh(t)", {"t"});
    const Mat h = hess_scalar(m, w, {1.3});
    CHECK(h(0, 0) == doctest::Approx(std::cosh(1.3)));
}

TEST_CASE("hess_scalar: constant fields have zero covariant Hessian") {
    for (const MetricChart& m : {sphere_chart(), polar_symbolic()}) {
        const Mat h = hess_scalar(m, constant_field(2, 42.0), {1.0, 1.0});
        CHECK(h.max_abs() < 1e-9);
    }
}

TEST_CASE("hess_scalar: FD fallback converges at second order") {
    // deviation from the analytic Hessian must shrink by >= 3 when h halves
    const MetricChart m = polar_fd_only();
    const ScalarField w_full = field_from_expr("sin(r)*cos(theta)", {"r", "theta"});
    ScalarField w_fd;
    w_fd.eval = w_full.eval;
    const Point p{2.0, 1.3};
    auto dev = [&](double h) {
        return (hess_scalar(m, w_fd, p, h) - hess_scalar(m, w_full, p, 1e-4)).max_abs();
    };
    const double d1 = dev(2e-3);
    const double d2 = dev(1e-3);
    CHECK(d1 / d2 >= 3.0);
}

TEST_CASE("curvature: euclidean space is flat") {
    const CurvatureReport rep = curvature(euclidean_metric(2, {-3, -3}, {3, 3}), {0.2, 0.1});
    CHECK(std::abs(rep.scalar) < 1e-10);
    CHECK(rep.ricci.max_abs() < 1e-10);
}

TEST_CASE("curvature: unit sphere scalar equals the space-form value") {
    const double expected = oracle::space_form_scalar(2, 1.0);
    CHECK(expected == doctest::Approx(2.0));
    for (const Point& p : {Point{0.8, 0.2}, Point{M_PI / 2, 3.0}, Point{2.1, 4.4}})
        CHECK(curvature(sphere_chart(), p).scalar == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("curvature: hyperbolic half-plane at (0, 1)") {
    Chart c = Chart::box({-2.0, 0.3}, {2.0, 3.0});
    const MetricChart m = metric_from_exprs(c, {"1/y^2", "0", "0", "1/y^2"}, {"x", "y"}, "half_plane");
    const double expected = oracle::space_form_scalar(2, -1.0);
    CHECK(curvature(m, {0.0, 1.0}).scalar == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("curvature: ricci symmetric and riemann antisymmetries hold") {
    const MetricChart m = sphere_chart();
    const Point p{1.2, 0.8};
    const CurvatureReport rep = curvature(m, p);
    CHECK(rep.ricci.sym_deviation() < 1e-8);
    const Mat g = m.g(p);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    const double r_ijkl = rep.riemann_lower(g, i, j, k, l);
                    worst = std::max(worst, std::abs(r_ijkl + rep.riemann_lower(g, i, j, l, k)));
                    worst = std::max(worst, std::abs(r_ijkl + rep.riemann_lower(g, j, i, k, l)));
                    // first Bianchi
                    worst = std::max(worst, std::abs(rep.riemann_at(i, j, k, l) + rep.riemann_at(i, k, l, j) +
                                                     rep.riemann_at(i, l, j, k)));
                }
    CHECK(worst < 1e-8);
}

TEST_CASE("lie_derivative_metric: plane isometries and a dilation") {
    const MetricChart m = euclidean_metric(2, {-3, -3}, {3, 3});
    VectorField translation{[](const Point&) { return Vec{1.0, 0.0}; }};
    VectorField rotation{[](const Point& p) { return Vec{-p[1], p[0]}; }};
    VectorField dilation{[](const Point& p) { return Vec{p[0], 0.0}; }};
    const Point p{0.7, -0.4};
    CHECK(lie_derivative_metric(m, translation, p).max_abs() < 1e-10);
    CHECK(lie_derivative_metric(m, rotation, p).max_abs() < 1e-7);
    const Mat d = lie_derivative_metric(m, dilation, p);
    CHECK(d(0, 0) == doctest::Approx(2.0));
    CHECK(std::abs(d(0, 1)) < 1e-10);
    CHECK(std::abs(d(1, 1)) < 1e-10);
}

TEST_CASE("vector_bracket: coordinate fields, the pinned convention, antisymmetry") {
    VectorField rotation{[](const Point& p) { return Vec{-p[1], p[0]}; }};
    VectorField ddx{[](const Point&) { return Vec{1.0, 0.0}; }};
    VectorField ddy{[](const Point&) { return Vec{0.0, 1.0}; }};
    const Point p{0.9, 1.7};

    const Vec zero = vector_bracket(ddx, ddy, p);
    CHECK(std::abs(zero[0]) < 1e-12);
    CHECK(std::abs(zero[1]) < 1e-12);

    // convention pinned in the golden file and cross-checked symbolically
    std::ifstream in(std::string(WR_GOLDEN_DIR) + "/liealg_conventions.json");
    REQUIRE(in.good());
    nlohmann::json conv;
    in >> conv;
    const auto want = conv["vector_bracket"]["example"]["result"].get<std::vector<double>>();
    const auto sym = oracle::bracket({"-y", "x"}, {"1", "0"}, {"x", "y"}, p);
    CHECK(sym[0] == doctest::Approx(want[0]));
    CHECK(sym[1] == doctest::Approx(want[1]));
    const Vec got = vector_bracket(rotation, ddx, p);
    CHECK(got[0] == doctest::Approx(want[0]).epsilon(1e-9));
    CHECK(got[1] == doctest::Approx(want[1]).epsilon(1e-9));

    const Vec self = vector_bracket(rotation, rotation, p);
    CHECK(std::abs(self[0]) < 1e-12);
    CHECK(std::abs(self[1]) < 1e-12);
}

TEST_CASE("chart invariants are enforced") {
    CHECK_THROWS_AS((void)Chart::box({1.0}, {1.0}), DomainError);
    Chart c = Chart::box({0.0}, {1.0});
    CHECK_THROWS_AS((void)c.set_periodic(0, 0.0), DomainError);
    CHECK_THROWS_AS(c.require_margin({0.0001}, 0.01), MarginError);
    c.set_periodic(0, 1.0);
    c.require_margin({0.0001}, 0.01); // periodic axes have no margin
}
