#include "wr/errors.hpp"
#include "wr/geom.hpp"
#include "wr/hill.hpp"
#include "wr/solspace.hpp"
#include "wr/spaceform.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wr;

namespace {

SpaceFormModel model_of(SpaceFormKind kind, int k, double tau) {
    SpaceFormSpec spec;
    spec.kind = kind;
    spec.dim = k;
    spec.tau = tau;
    return make_space_form(spec);
}

double basis_residual(const SpaceFormModel& m, int n_points, std::mt19937& rng) {
    const auto pts = sample_interior(m.metric.chart, n_points, 0.05, rng);
    double worst = 0.0;
    for (const auto& v : m.basis)
        for (const Point& p : pts) {
            const Mat target = m.metric.g(p).scaled(-m.spec.tau * v.eval(p));
            worst = std::max(worst, (hess_scalar(m.metric, v, p) - target).frobenius());
        }
    return worst;
}

} // namespace

TEST_CASE("euclidean bases: affine functions with vanishing Hessians") {
    std::mt19937 rng(1);
    for (int k : {1, 2, 3}) {
        const SpaceFormModel m = model_of(SpaceFormKind::euclidean, k, 0.0);
        REQUIRE(static_cast<int>(m.basis.size()) == k + 1);
        CHECK(m.basis[0].eval(Point(static_cast<size_t>(k), 0.3)) == doctest::Approx(1.0));
        CHECK(basis_residual(m, 20, rng) < 1e-10);
    }
}

TEST_CASE("sphere bases solve the eigenfunction equation") {
    std::mt19937 rng(2);
    for (int k : {1, 2, 3}) {
        const SpaceFormModel m = model_of(SpaceFormKind::sphere, k, 1.0);
        REQUIRE(static_cast<int>(m.basis.size()) == k + 1);
        CHECK(basis_residual(m, 50, rng) < 1e-7);
    }
}

TEST_CASE("hyperbolic bases solve the eigenfunction equation") {
    std::mt19937 rng(3);
    for (int k : {1, 2, 3}) {
        const SpaceFormModel m = model_of(SpaceFormKind::hyperbolic, k, -1.0);
        REQUIRE(static_cast<int>(m.basis.size()) == k + 1);
        CHECK(basis_residual(m, 50, rng) < 1e-7);
    }
    // a non-unit curvature still works
    std::mt19937 rng2(4);
    CHECK(basis_residual(model_of(SpaceFormKind::hyperbolic, 2, -2.5), 30, rng2) < 1e-7);
}

TEST_CASE("make_space_form rejects unsupported requests") {
    SpaceFormSpec spec;
    spec.kind = SpaceFormKind::sphere;
    spec.dim = 4;
    spec.tau = 1.0;
    CHECK_THROWS_AS((void)make_space_form(spec), CapabilityError);
    spec.dim = 2;
    spec.tau = 2.0;
    CHECK_THROWS_AS((void)make_space_form(spec), DomainError); // unit sphere only
    spec.kind = SpaceFormKind::hyperbolic;
    spec.tau = 0.5;
    CHECK_THROWS_AS((void)make_space_form(spec), DomainError);
    spec.kind = SpaceFormKind::euclidean;
    spec.dim = 1;
    spec.tau = 0.0;
    spec.tau_fn = [](double) { return 1.0; };
    spec.dim = 2;
    CHECK_THROWS_AS((void)make_space_form(spec), DomainError); // function tau needs dim 1
}

TEST_CASE("mu_of_solution on the three geometries") {
    std::mt19937 rng(5);
    {
        const SpaceFormModel m = model_of(SpaceFormKind::sphere, 2, 1.0);
        const auto pts = sample_interior(m.metric.chart, 20, 0.05, rng);
        CHECK(mu_of_solution(m, m.basis[0], pts) == doctest::Approx(1.0)); // cos(theta)
    }
    {
        const SpaceFormModel m = model_of(SpaceFormKind::euclidean, 2, 0.0);
        const auto pts = sample_interior(m.metric.chart, 20, 0.05, rng);
        CHECK(mu_of_solution(m, m.basis[1], pts) == doctest::Approx(1.0)); // x
        CHECK(mu_of_solution(m, m.basis[0], pts) == doctest::Approx(0.0)); // constants
    }
    {
        const SpaceFormModel m = model_of(SpaceFormKind::hyperbolic, 2, -1.0);
        const auto pts = sample_interior(m.metric.chart, 20, 0.05, rng);
        CHECK(mu_of_solution(m, m.basis[0], pts) == doctest::Approx(-1.0)); // cosh(r)
    }
}

TEST_CASE("mu_of_solution flags non-members") {
    std::mt19937 rng(6);
    const SpaceFormModel m = model_of(SpaceFormKind::sphere, 2, 1.0);
    const auto pts = sample_interior(m.metric.chart, 20, 0.05, rng);
    const ScalarField not_solution = field_from_expr("theta", {"theta", "phi"});
    CHECK_THROWS_AS((void)mu_of_solution(m, not_solution, pts), ViolationError);
}

TEST_CASE("gram matrices of the three geometries") {
    {
        const GramMu g = gram_mu(model_of(SpaceFormKind::sphere, 2, 1.0));
        CHECK((g.gram - Mat::identity(3)).max_abs() < 1e-9);
        CHECK(g.rank == 3);
    }
    {
        const GramMu g = gram_mu(model_of(SpaceFormKind::euclidean, 2, 0.0));
        CHECK((g.gram - Mat::diag({0.0, 1.0, 1.0})).max_abs() < 1e-9);
        CHECK(g.rank == 2); // nullity one: the constants
    }
    {
        const GramMu g = gram_mu(model_of(SpaceFormKind::hyperbolic, 2, -1.0));
        CHECK((g.gram - Mat::diag({-1.0, 1.0, 1.0})).max_abs() < 1e-9); // Lorentz signature
        CHECK(g.rank == 3);
    }
}

TEST_CASE("mu is constant along curves for random combinations") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    const SpaceFormModel m = model_of(SpaceFormKind::hyperbolic, 2, -1.0);
    for (int rep = 0; rep < 5; ++rep) {
        ScalarField v = scale_field(m.basis[0], coeff(rng));
        v = add_fields(v, scale_field(m.basis[1], coeff(rng)));
        v = add_fields(v, scale_field(m.basis[2], coeff(rng)));
        // sample a radial-ish curve through the chart
        std::vector<Point> curve;
        for (int i = 0; i <= 20; ++i) curve.push_back({0.2 + 2.0 * i / 20.0, 0.3 + 0.1 * i});
        CHECK_NOTHROW((void)mu_of_solution(m, v, curve, 1e-7));
    }
}

TEST_CASE("evaluation map has full rank at interior points") {
    std::mt19937 rng(8);
    for (int k : {1, 2, 3}) {
        const SpaceFormModel m = model_of(SpaceFormKind::sphere, k, 1.0);
        SolutionSpace s{m.metric, qform_scaled_metric(m.metric, -1.0), m.basis, {}};
        for (const Point& p : sample_interior(m.metric.chart, 5, 0.1, rng))
            CHECK(evaluation_rank(s, p) == k + 1);
    }
}

TEST_CASE("zonal function vanishes on a totally geodesic equator") {
    const SpaceFormModel m = model_of(SpaceFormKind::sphere, 2, 1.0);
    SolutionSpace s{m.metric, qform_scaled_metric(m.metric, -1.0), m.basis, {}};
    std::vector<Point> equator;
    for (int i = 0; i < 8; ++i) equator.push_back({M_PI / 2, 0.3 + i * 0.7});
    const ZeroSetReport rep = zero_set_check(s, m.basis[0], equator, 1e-8, 1e-7);
    CHECK(rep.max_hess_norm < 1e-7);
    CHECK(rep.min_grad_norm == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("function-valued characteristic delegates to the ode engine") {
    SpaceFormSpec spec;
    spec.kind = SpaceFormKind::euclidean;
    spec.dim = 1;
    spec.tau_fn = [](double) { return 1.0; }; // constant as a function: cos/sin basis
    const SpaceFormModel m = make_space_form(spec);
    REQUIRE(m.basis.size() == 2);
    for (double t : {-2.0, -0.5, 0.4, 2.7}) {
        CHECK(m.basis[0].eval({t}) == doctest::Approx(std::cos(t)).epsilon(1e-8));
        CHECK(m.basis[1].eval({t}) == doctest::Approx(std::sin(t)).epsilon(1e-8));
    }
    CHECK_THROWS_AS((void)m.tau(), PreconditionError);

    // genuinely varying characteristic: cross-check against a tighter integration
    SpaceFormSpec spec2 = spec;
    spec2.tau_fn = [](double t) { return 1.0 + 0.3 * std::sin(t); };
    const SpaceFormModel m2 = make_space_form(spec2);
    OdeProblem p{[](double t) { return -(1.0 + 0.3 * std::sin(t)); }, -3.0, 3.0, {}};
    const OdeSolution fine = solve_ivp(p, 1.0, 0.0, 1e-12, 1e-12, 0.0);
    for (double t : {-2.5, 0.0, 1.0, 2.5})
        CHECK(m2.basis[0].eval({t}) == doctest::Approx(fine.value(t)).epsilon(1e-8));
}
