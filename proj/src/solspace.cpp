#include "wr/solspace.hpp"

#include "wr/errors.hpp"

#include <cmath>
#include <cstdio>

namespace wr {

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool near_integer(double x, double tol = 1e-9) { return std::abs(x - std::round(x)) < tol; }

} // namespace

QuadraticFormField qform_from_exprs(const std::vector<std::string>& entries,
                                    const std::vector<std::string>& coords) {
    const int n = static_cast<int>(coords.size());
    std::vector<Expr> parsed;
    for (const auto& s : entries) parsed.push_back(parse_expr(s));
    QuadraticFormField f;
    f.q = [parsed, coords, n](const Point& p) {
        Env env;
        for (size_t i = 0; i < coords.size(); ++i) env[coords[i]] = p[i];
        Mat out(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(i, j) = eval(parsed[static_cast<size_t>(i * n + j)], env);
        return out;
    };
    return f;
}

QuadraticFormField qform_scaled_metric(const MetricChart& m, double factor) {
    QuadraticFormField f;
    auto g = m.g;
    f.q = [g, factor](const Point& p) { return g(p).scaled(factor); };
    return f;
}

double residual(const SolutionSpace& s, const ScalarField& w, const std::vector<Point>& grid, double h) {
    double worst = 0.0;
    for (const Point& p : grid) {
        const Mat hw = hess_scalar(s.manifold, w, p, h);
        const Mat target = s.q.q(p).scaled(w.eval(p));
        worst = std::max(worst, (hw - target).frobenius());
    }
    return worst;
}

Mat evaluation_matrix(const SolutionSpace& s, const std::vector<ScalarField>& fields, const Point& p,
                      double h) {
    const int n = s.manifold.chart.dim;
    Mat m(n + 1, static_cast<int>(fields.size()));
    for (size_t j = 0; j < fields.size(); ++j) {
        m(0, static_cast<int>(j)) = fields[j].eval(p);
        const Vec g = fields[j].grad_or_fd(p, h);
        for (int i = 0; i < n; ++i) m(i + 1, static_cast<int>(j)) = g[static_cast<size_t>(i)];
    }
    return m;
}

int evaluation_rank(const SolutionSpace& s, const Point& p, double h) {
    return rank(evaluation_matrix(s, s.basis, p, h), 1e-8);
}

ZeroSetReport zero_set_check(const SolutionSpace& s, const ScalarField& w,
                             const std::vector<Point>& level_points, double level_tol, double hess_tol,
                             double h) {
    ZeroSetReport rep;
    rep.points = level_points.size();
    bool first = true;
    for (const Point& p : level_points) {
        if (std::abs(w.eval(p)) >= level_tol)
            throw PreconditionError("level point does not lie on the zero set (|w| = " +
                                    std::to_string(std::abs(w.eval(p))) + ")");
        const double gn = std::sqrt(grad_norm_sq(s.manifold, w, p, h));
        if (first) rep.min_grad_norm = gn;
        rep.min_grad_norm = std::min(rep.min_grad_norm, gn);
        first = false;
        if (gn < 1e-8)
            throw ViolationError("gradient vanishes on the zero set: w is the zero solution", gn);
        rep.max_hess_norm = std::max(rep.max_hess_norm, hess_scalar(s.manifold, w, p, h).frobenius());
    }
    if (rep.max_hess_norm >= hess_tol)
        throw ViolationError("zero set is not totally geodesic to tolerance", rep.max_hess_norm);
    return rep;
}

std::vector<Point> find_zero_points(const ScalarField& w, const std::vector<Point>& grid, double tol) {
    std::vector<Point> zeros;
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        double fa = w.eval(grid[i]);
        double fb = w.eval(grid[i + 1]);
        if (fa == 0.0) {
            zeros.push_back(grid[i]);
            continue;
        }
        if (fb == 0.0) {
            if (i + 2 == grid.size()) zeros.push_back(grid[i + 1]);
            continue; // otherwise the next segment's left end records it
        }
        if (fa * fb > 0.0) continue;
        // bisection along the segment
        double a = 0.0, b = 1.0;
        Point pa = grid[i], pb = grid[i + 1];
        auto at = [&](double s) {
            Point p(pa.size());
            for (size_t k = 0; k < p.size(); ++k) p[k] = pa[k] + s * (pb[k] - pa[k]);
            return p;
        };
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            const double fm = w.eval(at(mid));
            if (std::abs(fm) < tol) {
                a = b = mid;
                break;
            }
            if (fa * fm <= 0.0)
                b = mid;
            else {
                a = mid;
                fa = fm;
            }
        }
        zeros.push_back(at(0.5 * (a + b)));
    }
    return zeros;
}

namespace {

struct CaseBasis {
    int dim = 0, dim_D = 0, dim_N = 0;
    std::vector<ScalarField> basis;
    std::vector<BoundaryFlag> flags;
};

ScalarField expr1d(const std::string& e) { return field_from_expr(e, {"t"}); }

CaseBasis line_case(double tau) {
    CaseBasis c;
    c.dim = 2;
    if (tau > 0.0) {
        const std::string rt = fmt_num(std::sqrt(tau));
        c.basis = {expr1d("cos(" + rt + "*t)"), expr1d("sin(" + rt + "*t)")};
    } else if (tau == 0.0) {
        c.basis = {expr1d("1"), expr1d("t")};
    } else {
        const std::string rt = fmt_num(std::sqrt(-tau));
        c.basis = {expr1d("exp(" + rt + "*t)"), expr1d("exp(-" + rt + "*t)")};
    }
    c.flags.assign(c.basis.size(), BoundaryFlag::none);
    return c;
}

CaseBasis circle_case(double tau, double radius) {
    CaseBasis c;
    if (tau > 0.0) {
        if (near_integer(radius * std::sqrt(tau))) {
            const std::string rt = fmt_num(std::sqrt(tau));
            c.dim = 2;
            c.basis = {expr1d("cos(" + rt + "*t)"), expr1d("sin(" + rt + "*t)")};
        }
    } else if (tau == 0.0) {
        c.dim = 1;
        c.basis = {expr1d("1")};
    }
    c.flags.assign(c.basis.size(), BoundaryFlag::none);
    return c;
}

CaseBasis half_line_case(double tau) {
    CaseBasis c;
    c.dim = 2;
    c.dim_D = 1;
    c.dim_N = 1;
    if (tau > 0.0) {
        const std::string rt = fmt_num(std::sqrt(tau));
        c.basis = {expr1d("sin(" + rt + "*t)"), expr1d("cos(" + rt + "*t)")};
    } else if (tau == 0.0) {
        c.basis = {expr1d("t"), expr1d("1")};
    } else {
        const std::string rt = fmt_num(std::sqrt(-tau));
        c.basis = {expr1d("sinh(" + rt + "*t)"), expr1d("cosh(" + rt + "*t)")};
    }
    c.flags = {BoundaryFlag::dirichlet, BoundaryFlag::neumann};
    return c;
}

CaseBasis interval_case(double tau, double length) {
    // Interval of length 2*pi*a; nontrivial solutions only when the circle
    // of the same scale carries them.
    CaseBasis c;
    const double a = length / (2.0 * M_PI);
    if (tau > 0.0 && near_integer(a * std::sqrt(tau))) {
        const std::string rt = fmt_num(std::sqrt(tau));
        c.dim = 2;
        c.dim_D = 1;
        c.dim_N = 1;
        c.basis = {expr1d("sin(" + rt + "*t)"), expr1d("cos(" + rt + "*t)")};
        c.flags = {BoundaryFlag::dirichlet, BoundaryFlag::neumann};
    } else if (tau == 0.0) {
        c.dim = 1;
        c.dim_D = 0;
        c.dim_N = 1;
        c.basis = {expr1d("1")};
        c.flags = {BoundaryFlag::neumann};
    }
    return c;
}

CaseBasis circle_monodromy_case(const OneDProblem& p) {
    const double T = 2.0 * M_PI * p.extent;
    OdeProblem op;
    op.theta = [tf = p.tau_fn](double t) { return -tf(t); };
    op.t_lo = 0.0;
    op.t_hi = T;
    op.period = T;
    const Mat m = monodromy(op);
    const Mat shifted = m - Mat::identity(2);
    const Vec sv = singular_values(shifted);
    int kdim = 0;
    for (double s : sv)
        if (s < 1e-8 * std::max(1.0, sv[0])) ++kdim;
    CaseBasis c;
    c.dim = kdim;
    if (kdim == 2) {
        c.basis = {solve_ivp(op, 1.0, 0.0).as_field(), solve_ivp(op, 0.0, 1.0).as_field()};
    } else if (kdim == 1) {
        // kernel direction of (M - I)
        const double r1 = std::hypot(shifted(0, 0), shifted(0, 1));
        const double r2 = std::hypot(shifted(1, 0), shifted(1, 1));
        Vec v = (r1 >= r2) ? Vec{-shifted(0, 1), shifted(0, 0)} : Vec{-shifted(1, 1), shifted(1, 0)};
        const double n = std::hypot(v[0], v[1]);
        if (n > 0) {
            v[0] /= n;
            v[1] /= n;
        }
        c.basis = {solve_ivp(op, v[0], v[1]).as_field()};
    }
    c.flags.assign(c.basis.size(), BoundaryFlag::none);
    return c;
}

CaseBasis interval_monodromy_case(const OneDProblem& p, double length) {
    // The interval carries the solutions that extend periodically across
    // it: dimension = dim ker(monodromy - I). Requires tau to continue
    // periodically with period = length.
    OdeProblem op;
    op.theta = [tf = p.tau_fn](double t) { return -tf(t); };
    op.t_lo = 0.0;
    op.t_hi = length;
    op.period = length;
    const Mat m = monodromy(op);
    const Mat shifted = m - Mat::identity(2);
    const Vec sv = singular_values(shifted);
    int kdim = 0;
    for (double s : sv)
        if (s < 1e-8 * std::max(1.0, sv[0])) ++kdim;
    CaseBasis c;
    c.dim = kdim;
    std::vector<Vec> inits;
    if (kdim == 2) {
        inits = {{0.0, 1.0}, {1.0, 0.0}};
    } else if (kdim == 1) {
        const double r1 = std::hypot(shifted(0, 0), shifted(0, 1));
        const double r2 = std::hypot(shifted(1, 0), shifted(1, 1));
        Vec v = (r1 >= r2) ? Vec{-shifted(0, 1), shifted(0, 0)} : Vec{-shifted(1, 1), shifted(1, 0)};
        const double n = std::hypot(v[0], v[1]);
        if (n > 0) {
            v[0] /= n;
            v[1] /= n;
        }
        inits = {v};
    }
    for (const Vec& v : inits) {
        const OdeSolution s = solve_ivp(op, v[0], v[1]);
        const double scale = std::max({std::abs(s.w.front()), std::abs(s.w.back()), 1.0});
        const bool dirichlet = std::abs(s.w.front()) < 1e-8 * scale && std::abs(s.w.back()) < 1e-8 * scale;
        const bool neumann = std::abs(s.dw.front()) < 1e-8 * scale && std::abs(s.dw.back()) < 1e-8 * scale;
        c.basis.push_back(s.as_field());
        if (dirichlet) {
            c.flags.push_back(BoundaryFlag::dirichlet);
            ++c.dim_D;
        } else if (neumann) {
            c.flags.push_back(BoundaryFlag::neumann);
            ++c.dim_N;
        } else {
            c.flags.push_back(BoundaryFlag::none);
        }
    }
    return c;
}

} // namespace

OneDClassification classify_1d(const OneDProblem& p) {
    if (p.extent <= 0.0) throw DomainError("domain extent must be positive");
    OneDClassification out;
    CaseBasis c;
    switch (p.domain) {
        case OneDDomain::line:
            out.chart = Chart::box({-p.extent}, {p.extent});
            if (p.has_tau_fn()) {
                OdeProblem op;
                op.theta = [tf = p.tau_fn](double t) { return -tf(t); };
                op.t_lo = -p.extent;
                op.t_hi = p.extent;
                c.dim = 2;
                c.basis = {solve_ivp(op, 1.0, 0.0, 1e-10, 1e-10, 0.0).as_field(),
                           solve_ivp(op, 0.0, 1.0, 1e-10, 1e-10, 0.0).as_field()};
                c.flags.assign(2, BoundaryFlag::none);
            } else {
                c = line_case(p.tau);
            }
            break;
        case OneDDomain::circle: {
            out.chart = Chart::box({0.0}, {2.0 * M_PI * p.extent});
            out.chart.set_periodic(0, 2.0 * M_PI * p.extent);
            c = p.has_tau_fn() ? circle_monodromy_case(p) : circle_case(p.tau, p.extent);
            break;
        }
        case OneDDomain::half_line: {
            const double L = std::max(p.extent, 1.0);
            out.chart = Chart::box({0.0}, {L});
            out.has_boundary = true;
            if (p.has_tau_fn()) {
                // boundary conditions only bind at t = 0 here
                OdeProblem op;
                op.theta = [tf = p.tau_fn](double t) { return -tf(t); };
                op.t_lo = 0.0;
                op.t_hi = L;
                c.dim = 2;
                c.dim_D = 1;
                c.dim_N = 1;
                c.basis = {solve_ivp(op, 0.0, 1.0).as_field(), solve_ivp(op, 1.0, 0.0).as_field()};
                c.flags = {BoundaryFlag::dirichlet, BoundaryFlag::neumann};
            } else {
                c = half_line_case(p.tau);
            }
            break;
        }
        case OneDDomain::interval:
            out.chart = Chart::box({0.0}, {p.extent});
            out.has_boundary = true;
            c = p.has_tau_fn() ? interval_monodromy_case(p, p.extent) : interval_case(p.tau, p.extent);
            break;
    }
    out.dim = c.dim;
    out.dim_D = c.dim_D;
    out.dim_N = c.dim_N;
    out.basis = std::move(c.basis);
    out.flags = std::move(c.flags);
    if (p.bc != BoundaryFlag::none) {
        std::vector<ScalarField> filtered;
        std::vector<BoundaryFlag> fflags;
        for (size_t i = 0; i < out.basis.size(); ++i)
            if (out.flags[i] == p.bc) {
                filtered.push_back(out.basis[i]);
                fflags.push_back(out.flags[i]);
            }
        out.basis = std::move(filtered);
        out.flags = std::move(fflags);
        out.dim = static_cast<int>(out.basis.size());
    }
    return out;
}

} // namespace wr
