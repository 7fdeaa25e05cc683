#include "wr/spaceform.hpp"

#include "wr/errors.hpp"
#include "wr/hill.hpp"

#include <cmath>
#include <cstdio>

namespace wr {

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

SpaceFormModel euclidean_model(int k) {
    SpaceFormModel m;
    m.metric = euclidean_metric(k, Vec(static_cast<size_t>(k), -3.0), Vec(static_cast<size_t>(k), 3.0),
                                "euclidean_" + std::to_string(k));
    std::vector<std::string> coords;
    for (int i = 0; i < k; ++i) coords.push_back("x" + std::to_string(i + 1));
    m.basis.push_back(constant_field(k, 1.0));
    for (int i = 0; i < k; ++i) m.basis.push_back(field_from_expr(coords[static_cast<size_t>(i)], coords));
    return m;
}

SpaceFormModel sphere_model(int k) {
    SpaceFormModel m;
    if (k == 1) {
        Chart c = Chart::box({0.0}, {2.0 * M_PI});
        c.set_periodic(0, 2.0 * M_PI);
        m.metric = metric_from_exprs(c, {"1"}, {"theta"}, "circle");
        m.basis.push_back(field_from_expr("cos(theta)", {"theta"}));
        m.basis.push_back(field_from_expr("sin(theta)", {"theta"}));
    } else if (k == 2) {
        Chart c = Chart::box({0.1, 0.0}, {M_PI - 0.1, 2.0 * M_PI});
        c.set_periodic(1, 2.0 * M_PI);
        m.metric = metric_from_exprs(c, {"1", "0", "0", "sin(theta)^2"}, {"theta", "phi"}, "sphere_2");
        const std::vector<std::string> coords{"theta", "phi"};
        m.basis.push_back(field_from_expr("cos(theta)", coords));
        m.basis.push_back(field_from_expr("sin(theta)*cos(phi)", coords));
        m.basis.push_back(field_from_expr("sin(theta)*sin(phi)", coords));
    } else {
        Chart c = Chart::box({0.25, 0.25, 0.0}, {M_PI - 0.25, M_PI - 0.25, 2.0 * M_PI});
        c.set_periodic(2, 2.0 * M_PI);
        const std::vector<std::string> coords{"theta", "alpha", "beta"};
        m.metric = metric_from_exprs(
            c, {"1", "0", "0", "0", "sin(theta)^2", "0", "0", "0", "sin(theta)^2*sin(alpha)^2"}, coords,
            "sphere_3");
        m.basis.push_back(field_from_expr("cos(theta)", coords));
        m.basis.push_back(field_from_expr("sin(theta)*cos(alpha)", coords));
        m.basis.push_back(field_from_expr("sin(theta)*sin(alpha)*cos(beta)", coords));
        m.basis.push_back(field_from_expr("sin(theta)*sin(alpha)*sin(beta)", coords));
    }
    return m;
}

SpaceFormModel hyperbolic_model(int k, double tau) {
    // geodesic polar chart: dr^2 + (sinh(a r)/a)^2 g_{S^{k-1}}, a = sqrt(-tau)
    const double a = std::sqrt(-tau);
    const std::string A = fmt_num(a);
    SpaceFormModel m;
    if (k == 1) {
        m.metric = metric_from_exprs(Chart::box({-3.0}, {3.0}), {"1"}, {"t"}, "hyperbolic_1");
        m.basis.push_back(field_from_expr("cosh(" + A + "*t)", {"t"}));
        m.basis.push_back(field_from_expr("sinh(" + A + "*t)", {"t"}));
    } else if (k == 2) {
        Chart c = Chart::box({0.1, 0.0}, {2.5, 2.0 * M_PI});
        c.set_periodic(1, 2.0 * M_PI);
        const std::vector<std::string> coords{"r", "phi"};
        m.metric = metric_from_exprs(c, {"1", "0", "0", "(sinh(" + A + "*r)/" + A + ")^2"}, coords,
                                     "hyperbolic_2");
        m.basis.push_back(field_from_expr("cosh(" + A + "*r)", coords));
        m.basis.push_back(field_from_expr("sinh(" + A + "*r)*cos(phi)", coords));
        m.basis.push_back(field_from_expr("sinh(" + A + "*r)*sin(phi)", coords));
    } else {
        Chart c = Chart::box({0.15, 0.25, 0.0}, {2.5, M_PI - 0.25, 2.0 * M_PI});
        c.set_periodic(2, 2.0 * M_PI);
        const std::vector<std::string> coords{"r", "alpha", "beta"};
        const std::string s2 = "(sinh(" + A + "*r)/" + A + ")^2";
        m.metric = metric_from_exprs(c, {"1", "0", "0", "0", s2, "0", "0", "0", s2 + "*sin(alpha)^2"},
                                     coords, "hyperbolic_3");
        m.basis.push_back(field_from_expr("cosh(" + A + "*r)", coords));
        m.basis.push_back(field_from_expr("sinh(" + A + "*r)*cos(alpha)", coords));
        m.basis.push_back(field_from_expr("sinh(" + A + "*r)*sin(alpha)*cos(beta)", coords));
        m.basis.push_back(field_from_expr("sinh(" + A + "*r)*sin(alpha)*sin(beta)", coords));
    }
    return m;
}

SpaceFormModel ode_line_model(const SpaceFormSpec& spec) {
    // dim F = 1 with a characteristic function: numeric two-solution basis
    // of v'' = -tau(t) v on the standard window.
    auto tau = spec.tau_fn;
    OdeProblem p;
    p.theta = [tau](double t) { return -tau(t); };
    p.t_lo = -3.0;
    p.t_hi = 3.0;
    SpaceFormModel m;
    m.metric = metric_from_exprs(Chart::box({-3.0}, {3.0}), {"1"}, {"t"}, "line_ode");
    m.basis.push_back(solve_ivp(p, 1.0, 0.0, 1e-10, 1e-10, 0.0).as_field());
    m.basis.push_back(solve_ivp(p, 0.0, 1.0, 1e-10, 1e-10, 0.0).as_field());
    return m;
}

} // namespace

double SpaceFormModel::tau() const {
    if (spec.has_tau_fn()) throw PreconditionError("characteristic function is not a constant");
    return spec.tau;
}

SpaceFormModel make_space_form(const SpaceFormSpec& spec) {
    if (spec.dim < 1) throw DomainError("fiber dimension must be positive");
    if (spec.dim > 3)
        throw CapabilityError("space forms are realized for dim <= 3 only");
    if (spec.has_tau_fn()) {
        if (spec.dim != 1) throw DomainError("a characteristic function requires dim == 1");
        SpaceFormModel m = ode_line_model(spec);
        m.spec = spec;
        return m;
    }
    SpaceFormModel m;
    switch (spec.kind) {
        case SpaceFormKind::sphere:
            if (spec.tau != 1.0) throw DomainError("sphere fibers are normalized to the unit sphere (tau = 1)");
            m = sphere_model(spec.dim);
            break;
        case SpaceFormKind::euclidean:
            if (spec.tau != 0.0) throw DomainError("euclidean space requires tau = 0");
            m = euclidean_model(spec.dim);
            break;
        case SpaceFormKind::hyperbolic:
            if (!(spec.tau < 0.0)) throw DomainError("hyperbolic space requires tau < 0");
            m = hyperbolic_model(spec.dim, spec.tau);
            break;
    }
    m.spec = spec;
    return m;
}

double mu_of_solution(const SpaceFormModel& model, const ScalarField& v, const std::vector<Point>& points,
                      double tol) {
    const double tau = model.tau();
    double lo = 0.0, hi = 0.0, sum = 0.0;
    bool first = true;
    for (const Point& p : points) {
        const double val = tau * v.eval(p) * v.eval(p) + grad_norm_sq(model.metric, v, p);
        if (first) {
            lo = hi = val;
            first = false;
        }
        lo = std::min(lo, val);
        hi = std::max(hi, val);
        sum += val;
    }
    if (points.empty()) throw DomainError("mu_of_solution needs at least one point");
    if (hi - lo >= tol)
        throw ViolationError("mu is not constant across the sample points", hi - lo);
    return sum / static_cast<double>(points.size());
}

GramMu gram_mu(const SpaceFormModel& model, double tol) {
    const double tau = model.tau();
    const int n = static_cast<int>(model.basis.size());
    std::mt19937 rng(12345);
    const auto pts = sample_interior(model.metric.chart, 10, 0.05, rng);
    GramMu out;
    out.gram = Mat(n, n);
    Mat lo(n, n), hi(n, n);
    bool first = true;
    for (const Point& p : pts) {
        Mat at(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double val =
                    tau * model.basis[static_cast<size_t>(i)].eval(p) * model.basis[static_cast<size_t>(j)].eval(p) +
                    grad_inner(model.metric, model.basis[static_cast<size_t>(i)], model.basis[static_cast<size_t>(j)],
                               p);
                at(i, j) = val;
                at(j, i) = val;
            }
        if (first) {
            lo = at;
            hi = at;
            first = false;
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                lo(i, j) = std::min(lo(i, j), at(i, j));
                hi(i, j) = std::max(hi(i, j), at(i, j));
            }
    }
    out.spread = (hi - lo).max_abs();
    if (out.spread >= tol)
        throw ViolationError("mu Gram matrix is not constant across sample points", out.spread);
    out.gram = lo + (hi - lo).scaled(0.5);
    out.rank = rank(out.gram);
    return out;
}

MetricChart space_form_metric(double curvature, int d, const std::string& name) {
    if (d == 1) return metric_from_exprs(Chart::box({-3.0}, {3.0}), {"1"}, {"s"}, name);
    if (d != 2) throw CapabilityError("space_form_metric supports d <= 2");
    const std::vector<std::string> coords{"r", "phi"};
    if (curvature == 0.0) {
        Chart c = Chart::box({0.1, 0.0}, {2.5, 2.0 * M_PI});
        c.set_periodic(1, 2.0 * M_PI);
        return metric_from_exprs(c, {"1", "0", "0", "r^2"}, coords, name);
    }
    if (curvature > 0.0) {
        const double a = std::sqrt(curvature);
        const double rmax = std::min(2.5, M_PI / a - 0.1);
        Chart c = Chart::box({0.1, 0.0}, {rmax, 2.0 * M_PI});
        c.set_periodic(1, 2.0 * M_PI);
        return metric_from_exprs(c, {"1", "0", "0", "(sin(" + fmt_num(a) + "*r)/" + fmt_num(a) + ")^2"},
                                 coords, name);
    }
    const double a = std::sqrt(-curvature);
    Chart c = Chart::box({0.1, 0.0}, {2.5, 2.0 * M_PI});
    c.set_periodic(1, 2.0 * M_PI);
    return metric_from_exprs(c, {"1", "0", "0", "(sinh(" + fmt_num(a) + "*r)/" + fmt_num(a) + ")^2"}, coords,
                             name);
}

} // namespace wr
