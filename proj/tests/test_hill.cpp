#include "wr/errors.hpp"
#include "wr/geom.hpp"
#include "wr/hill.hpp"

#include <doctest.h>

#include <cmath>

using namespace wr;

namespace {

OdeProblem constant_theta(double theta, double lo, double hi) {
    return OdeProblem{[theta](double) { return theta; }, lo, hi, {}};
}

double max_err(const OdeSolution& s, const std::function<double(double)>& exact, int samples = 257) {
    double worst = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double t = s.t_lo + (s.t_hi - s.t_lo) * i / static_cast<double>(samples);
        worst = std::max(worst, std::abs(s.value(t) - exact(t)));
    }
    return worst;
}

} // namespace

TEST_CASE("solve_ivp: harmonic oscillator reproduces cos") {
    const OdeSolution s = solve_ivp(constant_theta(-1.0, 0.0, 2.0 * M_PI), 1.0, 0.0);
    CHECK(max_err(s, [](double t) { return std::cos(t); }) < 1e-8);
}

TEST_CASE("solve_ivp: theta = 1 reproduces cosh, both directions") {
    const OdeSolution s = solve_ivp(constant_theta(1.0, -2.0, 2.0), 1.0, 0.0, 1e-10, 1e-10, 0.0);
    CHECK(max_err(s, [](double t) { return std::cosh(t); }) < 1e-8);
    CHECK(s.deriv(-1.5) == doctest::Approx(std::sinh(-1.5)).epsilon(1e-9));
}

TEST_CASE("solve_ivp: gaussian profile from theta = t^2 + 1") {
    OdeProblem p{[](double t) { return t * t + 1.0; }, 0.0, 2.0, {}};
    const OdeSolution s = solve_ivp(p, 1.0, 0.0);
    CHECK(max_err(s, [](double t) { return std::exp(t * t / 2.0); }) < 1e-7);
}

TEST_CASE("solve_ivp: error scales with the local tolerance") {
    double prev = 1.0;
    for (double tol : {1e-6, 1e-8, 1e-10}) {
        const OdeSolution s = solve_ivp(constant_theta(-1.0, 0.0, 2.0 * M_PI), 1.0, 0.0, tol, tol);
        double node_err = 0.0;
        for (size_t i = 0; i < s.t.size(); ++i)
            node_err = std::max(node_err, std::abs(s.w[i] - std::cos(s.t[i])));
        CHECK(node_err < 2e3 * tol);
        CHECK(node_err <= prev + 1e-14);
        prev = node_err;
    }
}

TEST_CASE("solve_ivp: rejects bad input") {
    CHECK_THROWS_AS((void)solve_ivp(constant_theta(1.0, 0.0, 1.0), std::nan(""), 0.0), DomainError);
    CHECK_THROWS_AS((void)solve_ivp(constant_theta(1.0, 0.0, 1.0), 1.0, 0.0, 1e-10, 1e-10, 7.0), DomainError);
}

TEST_CASE("solve_ivp: a blow-up of theta raises an integration error with its location") {
    OdeProblem p{[](double t) { return 1.0 / ((1.0 - t) * (1.0 - t)); }, 0.0, 2.0, {}};
    try {
        (void)solve_ivp(p, 1.0, 0.0);
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.location > 0.5);
        CHECK(e.location <= 1.1);
    }
}

TEST_CASE("wronskian: fundamental pairs and dependent pairs") {
    const OdeProblem p = constant_theta(-1.0, 0.0, 2.0 * M_PI);
    const OdeSolution c = solve_ivp(p, 1.0, 0.0);
    const OdeSolution s = solve_ivp(p, 0.0, 1.0);
    for (double t : {0.1, 1.0, 3.0, 6.0}) CHECK(wronskian(c, s, t) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(wronskian_spread(c, s) < 1e-7);

    const OdeSolution c2 = solve_ivp(p, 2.0, 0.0); // dependent: 2 cos
    CHECK(std::abs(wronskian(c, c2, 1.0)) < 1e-9);
}

TEST_CASE("wronskian: the gaussian pair normalizes to one") {
    OdeProblem p{[](double t) { return t * t + 1.0; }, -2.0, 2.0, {}};
    const OdeSolution v1 = solve_ivp(p, 1.0, 0.0, 1e-10, 1e-10, 0.0);
    const OdeSolution v2 = solve_ivp(p, 1.0, 1.0, 1e-10, 1e-10, 0.0); // v1 * (erf part + 1)
    for (double t : {-1.5, 0.0, 1.5}) CHECK(wronskian(v1, v2, t) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(wronskian_spread(v1, v2) < 1e-7);
}

TEST_CASE("monodromy: closed-form cases") {
    OdeProblem p = constant_theta(-1.0, 0.0, 2.0 * M_PI);
    p.period = 2.0 * M_PI;
    const Mat full = monodromy(p);
    CHECK((full - Mat::identity(2)).max_abs() < 1e-9);

    p.period = M_PI;
    const Mat anti = monodromy(p);
    CHECK((anti + Mat::identity(2)).max_abs() < 1e-9);

    OdeProblem q = constant_theta(0.0, 0.0, 1.0);
    q.period = 1.0;
    const Mat shear = monodromy(q);
    CHECK(shear(0, 0) == doctest::Approx(1.0));
    CHECK(shear(0, 1) == doctest::Approx(1.0));
    CHECK(std::abs(shear(1, 0)) < 1e-12);
    CHECK(shear(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("monodromy: aperiodic theta is rejected; Liouville holds for Hill problems") {
    OdeProblem bad{[](double t) { return t; }, 0.0, 1.0, 1.0};
    CHECK_THROWS_AS((void)monodromy(bad), PreconditionError);

    OdeProblem hill{[](double t) { return -1.0 - 0.4 * std::cos(t); }, 0.0, 2.0 * M_PI, 2.0 * M_PI};
    CHECK(std::abs(det(monodromy(hill)) - 1.0) < 1e-8);
}

TEST_CASE("coexistence: the three closed-form verdicts") {
    OdeProblem p = constant_theta(-1.0, 0.0, 2.0 * M_PI);
    p.period = 2.0 * M_PI;
    const CoexistenceReport all = coexistence(p);
    CHECK(all.verdict == Coexistence::all_periodic);
    CHECK(all.periodic_dim == 2);
    CHECK_FALSE(all.antiperiodic);

    OdeProblem q = constant_theta(0.0, 0.0, 1.0);
    q.period = 1.0;
    const CoexistenceReport ray = coexistence(q);
    CHECK(ray.verdict == Coexistence::one_periodic_ray);
    CHECK(ray.periodic_dim == 1);

    OdeProblem r = constant_theta(1.0, 0.0, 1.0);
    r.period = 1.0;
    const CoexistenceReport none = coexistence(r);
    CHECK(none.verdict == Coexistence::none);
    CHECK(none.periodic_dim == 0);
}

TEST_CASE("coexistence: antiperiodic monodromy still counts as full coexistence") {
    OdeProblem p = constant_theta(-1.0, 0.0, M_PI);
    p.period = M_PI;
    const CoexistenceReport rep = coexistence(p);
    CHECK(rep.verdict == Coexistence::all_periodic);
    CHECK(rep.antiperiodic);
}

TEST_CASE("positive_excludes_allperiodic: monotone ratios") {
    const OdeProblem p = constant_theta(1.0, -2.0, 2.0);
    const OdeSolution ch = solve_ivp(p, 1.0, 0.0, 1e-10, 1e-10, 0.0);
    const OdeSolution sh = solve_ivp(p, 0.0, 1.0, 1e-10, 1e-10, 0.0);
    const MonotoneRatioWitness w1 = positive_excludes_allperiodic(ch, sh);
    CHECK(w1.monotone);
    CHECK(w1.min_slope > 0.0);
    // the ratio is tanh: increasing
    CHECK(w1.ratio.front() < w1.ratio.back());

    const OdeSolution e1 = solve_ivp(p, 1.0, 1.0, 1e-10, 1e-10, 0.0);
    const OdeSolution e2 = solve_ivp(p, 1.0, -1.0, 1e-10, 1e-10, 0.0);
    const MonotoneRatioWitness w2 = positive_excludes_allperiodic(e1, e2);
    CHECK(w2.monotone);
    CHECK(w2.ratio.front() > w2.ratio.back()); // e^{-2t} decreasing

    // sign-changing first solution is rejected
    CHECK_THROWS_AS((void)positive_excludes_allperiodic(sh, ch), PreconditionError);
    // dependent pair is rejected
    const OdeSolution ch2 = solve_ivp(p, 2.0, 0.0, 1e-10, 1e-10, 0.0);
    CHECK_THROWS_AS((void)positive_excludes_allperiodic(ch, ch2), PreconditionError);
}

TEST_CASE("build_isocurved_pair: the gaussian profile") {
    const ScalarField v1 = field_from_expr("exp(t^2/2)", {"t"});
    const IsocurvedBuild build = build_isocurved_pair(v1, 1.0, -2.0, 2.0, 0.0042);
    const SurfacePair& pair = build.pair;
    CHECK(build.tail_checked);
    // tau(t) = -t^2 - 1 and u = sqrt(pi)/2 erf + 1
    for (double t : {-1.5, 0.0, 0.8, 1.9}) {
        CHECK(pair.tau(t) == doctest::Approx(-t * t - 1.0).epsilon(1e-12));
        const double u_expected = std::sqrt(M_PI) / 2.0 * std::erf(t) + 1.0;
        CHECK(pair.v2.eval({t}) == doctest::Approx(u_expected * std::exp(t * t / 2)).epsilon(1e-10));
    }
    CHECK(pair.wronskian_value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pair.wronskian_spread < 1e-7);
    CHECK(pair.curvature_match < 1e-6);
}

TEST_CASE("build_isocurved_pair: exponential profile has a closed-form companion") {
    const ScalarField v1 = field_from_expr("exp(t)", {"t"});
    const double c2 = 30.0;
    const IsocurvedBuild build = build_isocurved_pair(v1, c2, -2.0, 2.0);
    // u(t) = (1 - exp(-2t))/2 + c2, so v2 = exp(t)(c2 + 1/2) - exp(-t)/2
    for (double t : {-1.0, 0.0, 1.0}) {
        const double expected = std::exp(t) * (c2 + 0.5) - 0.5 * std::exp(-t);
        CHECK(build.pair.v2.eval({t}) == doctest::Approx(expected).epsilon(1e-10));
        CHECK(build.pair.tau(t) == doctest::Approx(-1.0).epsilon(1e-12));
    }
    CHECK_FALSE(build.tail_checked);
}

TEST_CASE("build_isocurved_pair: positivity failure is rejected") {
    // u(-inf) = -integral of sech^2 = -1 < 0 when C2 = 0
    const ScalarField v1 = field_from_expr("cosh(t)", {"t"});
    CHECK_THROWS_AS((void)build_isocurved_pair(v1, 0.0, -4.0, 4.0, std::nullopt), ConstructionError);
    // and with a generous constant it succeeds
    CHECK_NOTHROW((void)build_isocurved_pair(v1, 2.0, -4.0, 4.0, 1e-3));
}

TEST_CASE("non_isometry_witness: conclusive on the gaussian pair") {
    const ScalarField v1 = field_from_expr("exp(t^2/2)", {"t"});
    const SurfacePair pair = build_isocurved_pair(v1, 1.0, -2.0, 2.0, 0.0042).pair;
    const NonIsometryReport rep = non_isometry_witness(pair);
    CHECK(rep.conclusive);
    CHECK(rep.verdict == "not isometric");
    CHECK(rep.min_log_slope_gap > 0.0);
    // oracle: the gap is u'/u = 1/(u v1^2); check the window minimum
    double expected_min = 1e300;
    for (int i = 0; i <= 512; ++i) {
        const double t = rep.window_lo + (rep.window_hi - rep.window_lo) * i / 512.0;
        const double u = std::sqrt(M_PI) / 2.0 * std::erf(t) + 1.0;
        expected_min = std::min(expected_min, 1.0 / (u * std::exp(t * t)));
    }
    CHECK(rep.min_log_slope_gap == doctest::Approx(expected_min).epsilon(1e-3));
}

TEST_CASE("non_isometry_witness: inconclusive cases") {
    const ScalarField v1 = field_from_expr("exp(t^2/2)", {"t"});
    SurfacePair dependent;
    dependent.v1 = v1;
    dependent.v2 = scale_field(v1, 2.0);
    dependent.t_lo = -2.0;
    dependent.t_hi = 2.0;
    dependent.tau = [](double t) { return -t * t - 1.0; };
    dependent.wronskian_value = 0.0;
    const NonIsometryReport r1 = non_isometry_witness(dependent);
    CHECK_FALSE(r1.conclusive);
    CHECK(r1.verdict == "inconclusive");

    // constant curvature: no monotone window
    const ScalarField e1 = field_from_expr("exp(t)", {"t"});
    const SurfacePair const_tau = build_isocurved_pair(e1, 30.0, -2.0, 2.0).pair;
    const NonIsometryReport r2 = non_isometry_witness(const_tau);
    CHECK_FALSE(r2.conclusive);
    CHECK(r2.verdict == "inconclusive");
}

TEST_CASE("ode solution exposes a field with the defining second derivative") {
    OdeProblem p{[](double t) { return -(1.0 + 0.5 * std::sin(t)); }, 0.0, 6.0, {}};
    const OdeSolution s = solve_ivp(p, 1.0, 0.5);
    const ScalarField f = s.as_field();
    for (double t : {0.7, 3.1, 5.2}) {
        CHECK(f.eval({t}) == doctest::Approx(s.value(t)));
        CHECK(f.hess({t})(0, 0) == doctest::Approx(p.theta(t) * s.value(t)).epsilon(1e-9));
    }
    // dense output against an independent finer integration
    const OdeSolution fine = solve_ivp(p, 1.0, 0.5, 1e-12, 1e-12);
    double dev = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double t = 6.0 * i / 100.0;
        dev = std::max(dev, std::abs(s.value(t) - fine.value(t)));
    }
    CHECK(dev < 1e-8);
}
