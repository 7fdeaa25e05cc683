#include "wr/errors.hpp"
#include "wr/expr.hpp"

#include <doctest.h>

#include <cmath>

using namespace wr;

TEST_CASE("parse and evaluate") {
    CHECK(eval(parse_expr("1 + 2*3"), {}) == doctest::Approx(7.0));
    CHECK(eval(parse_expr("2^3^2"), {}) == doctest::Approx(512.0)); // right associative
    CHECK(eval(parse_expr("-t^2"), {{"t", 3.0}}) == doctest::Approx(-9.0));
    CHECK(eval(parse_expr("sin(pi/2)"), {}) == doctest::Approx(1.0));
    CHECK(eval(parse_expr("exp(t^2/2)"), {{"t", 2.0}}) == doctest::Approx(std::exp(2.0)));
    CHECK(eval(parse_expr("erf(1)"), {}) == doctest::Approx(std::erf(1.0)));
    CHECK(eval(parse_expr("pow(2, 10)"), {}) == doctest::Approx(1024.0));
    CHECK(eval(parse_expr("(1 - tanh(t)^2)"), {{"t", 0.7}}) ==
          doctest::Approx(1.0 - std::pow(std::tanh(0.7), 2)));
}

TEST_CASE("rejects what the grammar does not whitelist") {
    CHECK_THROWS_AS((void)parse_expr("system(t)"), DomainError);
    CHECK_THROWS_AS((void)parse_expr("1 + "), DomainError);
    CHECK_THROWS_AS((void)parse_expr("(t"), DomainError);
    CHECK_THROWS_AS((void)eval(parse_expr("nope"), {}), DomainError);
}

TEST_CASE("symbolic derivatives against closed forms") {
    const Env env{{"t", 0.8}};
    CHECK(eval(diff(parse_expr("t^3"), "t"), env) == doctest::Approx(3 * 0.8 * 0.8));
    CHECK(eval(diff(parse_expr("sin(t^2)"), "t"), env) == doctest::Approx(2 * 0.8 * std::cos(0.64)));
    CHECK(eval(diff(parse_expr("t*exp(t)"), "t"), env) == doctest::Approx((1 + 0.8) * std::exp(0.8)));
    CHECK(eval(diff(parse_expr("sinh(t)/cosh(t)"), "t"), env) ==
          doctest::Approx(1.0 / std::pow(std::cosh(0.8), 2)));
    CHECK(eval(diff(parse_expr("erf(t)"), "t"), env) ==
          doctest::Approx(2.0 / std::sqrt(M_PI) * std::exp(-0.64)));
    CHECK(eval(diff(parse_expr("t^t"), "t"), env) ==
          doctest::Approx(std::pow(0.8, 0.8) * (std::log(0.8) + 1.0)));
}

TEST_CASE("symbolic derivative agrees with finite differences") {
    const char* exprs[] = {"exp(t^2/2)", "cosh(t)*sin(t)", "1/(1+t^2)", "log(2+t)", "sqrt(4+t)",
                           "tan(t/2)"};
    const double h = 1e-6;
    for (const char* s : exprs) {
        const Expr e = parse_expr(s);
        const Expr d = diff(e, "t");
        for (double t : {-1.2, -0.3, 0.0, 0.7, 1.4}) {
            const double fd = (eval(e, {{"t", t + h}}) - eval(e, {{"t", t - h}})) / (2 * h);
            CHECK(eval(d, {{"t", t}}) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("variables are reported") {
    const auto vars = variables(parse_expr("sin(theta)*cos(phi) + 2"));
    REQUIRE(vars.size() == 2);
    CHECK(vars[0] == "phi");
    CHECK(vars[1] == "theta");
}
