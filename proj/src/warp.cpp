#include "wr/warp.hpp"

#include "wr/errors.hpp"

#include <cmath>

namespace wr {

namespace {

double rel_dev(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

// Cubic extrapolation to x = 0 from samples at eps, 2 eps, 3 eps, 4 eps.
double extrapolate_to_zero(const std::function<double(double)>& f, double eps) {
    return 4.0 * f(eps) - 6.0 * f(2.0 * eps) + 4.0 * f(3.0 * eps) - f(4.0 * eps);
}

} // namespace

BaseSpace make_base_space(MetricChart B, ScalarField u, std::vector<BoundaryFace> boundary) {
    if (!u.has_grad() || !u.has_hess())
        throw DomainError("warping function needs closed-form first and second derivatives");
    BaseSpace bs;
    bs.metric = std::move(B);
    bs.u = std::move(u);
    bs.boundary = std::move(boundary);
    {
        std::vector<int> counts(static_cast<size_t>(bs.metric.chart.dim), 9);
        for (const Point& p : interior_grid(bs.metric.chart, counts, 0.0))
            if (!(bs.u.eval(p) > 0.0)) throw DomainError("warping function must be positive on the interior");
    }
    const MetricChart metric = bs.metric;
    const ScalarField uu = bs.u;
    bs.q_B.q = [metric, uu](const Point& x) {
        return hess_scalar(metric, uu, x).scaled(1.0 / uu.eval(x));
    };
    // |grad u| = 1 on each declared u = 0 face, by one-sided extrapolation
    // along the face axis from inside the collar.
    for (const BoundaryFace& face : bs.boundary) {
        const int ax = face.axis;
        Point probe(static_cast<size_t>(bs.metric.chart.dim));
        for (int i = 0; i < bs.metric.chart.dim; ++i)
            probe[static_cast<size_t>(i)] =
                0.5 * (bs.metric.chart.lo[static_cast<size_t>(i)] + bs.metric.chart.hi[static_cast<size_t>(i)]);
        const double dir = (face.coord <= probe[static_cast<size_t>(ax)]) ? 1.0 : -1.0;
        auto grad_norm_at = [&](double s) {
            Point x = probe;
            x[static_cast<size_t>(ax)] = face.coord + dir * s;
            return std::sqrt(grad_norm_sq(bs.metric, bs.u, x));
        };
        const double at_face = extrapolate_to_zero(grad_norm_at, 0.02);
        if (std::abs(at_face - 1.0) > 1e-4)
            throw ConstructionError("|grad u| != 1 at the declared boundary face (got " +
                                    std::to_string(at_face) + ")");
        const double u_at_face = extrapolate_to_zero(
            [&](double s) {
                Point x = probe;
                x[static_cast<size_t>(ax)] = face.coord + dir * s;
                return bs.u.eval(x);
            },
            0.02);
        if (std::abs(u_at_face) > 1e-4)
            throw ConstructionError("u does not vanish at the declared boundary face");
    }
    return bs;
}

Point WarpedProductSpec::base_point(const Point& p) const {
    return Point(p.begin(), p.begin() + base_dim());
}

Point WarpedProductSpec::fiber_point(const Point& p) const {
    return Point(p.begin() + base_dim(), p.end());
}

Point WarpedProductSpec::join(const Point& x, const Point& y) const {
    Point p = x;
    p.insert(p.end(), y.begin(), y.end());
    return p;
}

ScalarField WarpedProductSpec::lift_base(const ScalarField& f) const {
    const int bd = base_dim(), fd = fiber_dim();
    ScalarField out;
    out.eval = [f, bd](const Point& p) { return f.eval(Point(p.begin(), p.begin() + bd)); };
    if (f.has_grad()) out.grad = [f, bd, fd](const Point& p) {
        Vec g = f.grad(Point(p.begin(), p.begin() + bd));
        g.resize(static_cast<size_t>(bd + fd), 0.0);
        return g;
    };
    if (f.has_hess()) out.hess = [f, bd, fd](const Point& p) {
        const Mat hb = f.hess(Point(p.begin(), p.begin() + bd));
        Mat h(bd + fd, bd + fd);
        for (int i = 0; i < bd; ++i)
            for (int j = 0; j < bd; ++j) h(i, j) = hb(i, j);
        return h;
    };
    return out;
}

ScalarField WarpedProductSpec::lift_fiber(const ScalarField& f) const {
    const int bd = base_dim(), fd = fiber_dim();
    ScalarField out;
    out.eval = [f, bd](const Point& p) { return f.eval(Point(p.begin() + bd, p.end())); };
    if (f.has_grad()) out.grad = [f, bd, fd](const Point& p) {
        const Vec gf = f.grad(Point(p.begin() + bd, p.end()));
        Vec g(static_cast<size_t>(bd + fd), 0.0);
        for (int i = 0; i < fd; ++i) g[static_cast<size_t>(bd + i)] = gf[static_cast<size_t>(i)];
        return g;
    };
    if (f.has_hess()) out.hess = [f, bd, fd](const Point& p) {
        const Mat hf = f.hess(Point(p.begin() + bd, p.end()));
        Mat h(bd + fd, bd + fd);
        for (int i = 0; i < fd; ++i)
            for (int j = 0; j < fd; ++j) h(bd + i, bd + j) = hf(i, j);
        return h;
    };
    return out;
}

double WarpedProductSpec::tau_at(const Point& fiber_pt) const {
    if (fiber.spec.has_tau_fn()) return fiber.spec.tau_fn(fiber_pt[0]);
    return fiber.spec.tau;
}

std::vector<Point> WarpedProductSpec::product_grid(int base_count, int fiber_count, double margin,
                                                   double u_min) const {
    std::vector<int> counts(static_cast<size_t>(base_dim()), base_count);
    std::vector<int> fcounts(static_cast<size_t>(fiber_dim()), fiber_count);
    const auto xs = interior_grid(base.metric.chart, counts, margin);
    const auto ys = interior_grid(fiber.metric.chart, fcounts, margin);
    std::vector<Point> pts;
    pts.reserve(xs.size() * ys.size());
    for (const Point& x : xs) {
        if (base.u.eval(x) < u_min) continue; // degenerate collar excluded
        for (const Point& y : ys) pts.push_back(join(x, y));
    }
    return pts;
}

WarpedProductSpec build_warped(BaseSpace base, SpaceFormModel fiber) {
    WarpedProductSpec wp;
    wp.base = std::move(base);
    wp.fiber = std::move(fiber);

    const Chart& bc = wp.base.metric.chart;
    const Chart& fc = wp.fiber.metric.chart;
    Vec lo = bc.lo, hi = bc.hi;
    lo.insert(lo.end(), fc.lo.begin(), fc.lo.end());
    hi.insert(hi.end(), fc.hi.begin(), fc.hi.end());
    Chart total = Chart::box(lo, hi);
    for (int i = 0; i < bc.dim; ++i)
        if (bc.is_periodic(i)) total.set_periodic(i, bc.period[static_cast<size_t>(i)]);
    for (int i = 0; i < fc.dim; ++i)
        if (fc.is_periodic(i)) total.set_periodic(bc.dim + i, fc.period[static_cast<size_t>(i)]);

    const int bd = bc.dim, fd = fc.dim;
    const auto gB = wp.base.metric.g;
    const auto gF = wp.fiber.metric.g;
    const ScalarField u = wp.base.u;
    wp.total.chart = total;
    wp.total.name = wp.base.metric.name + "x_u_" + wp.fiber.metric.name;
    wp.total.g = [gB, gF, u, bd, fd](const Point& p) {
        const Point x(p.begin(), p.begin() + bd);
        const Point y(p.begin() + bd, p.end());
        const Mat gb = gB(x);
        const Mat gf = gF(y);
        const double uu = u.eval(x);
        Mat g(bd + fd, bd + fd);
        for (int i = 0; i < bd; ++i)
            for (int j = 0; j < bd; ++j) g(i, j) = gb(i, j);
        for (int i = 0; i < fd; ++i)
            for (int j = 0; j < fd; ++j) g(bd + i, bd + j) = uu * uu * gf(i, j);
        return g;
    };
    if (wp.base.metric.dg && wp.fiber.metric.dg && u.has_grad()) {
        const auto dgB = wp.base.metric.dg;
        const auto dgF = wp.fiber.metric.dg;
        wp.total.dg = [dgB, dgF, gF, u, bd, fd](const Point& p) {
            const Point x(p.begin(), p.begin() + bd);
            const Point y(p.begin() + bd, p.end());
            const std::vector<Mat> db = dgB(x);
            const std::vector<Mat> df = dgF(y);
            const Mat gf = gF(y);
            const double uu = u.eval(x);
            const Vec du = u.grad(x);
            std::vector<Mat> out(static_cast<size_t>(bd + fd), Mat(bd + fd, bd + fd));
            for (int l = 0; l < bd; ++l) {
                Mat& d = out[static_cast<size_t>(l)];
                for (int i = 0; i < bd; ++i)
                    for (int j = 0; j < bd; ++j) d(i, j) = db[static_cast<size_t>(l)](i, j);
                const double c = 2.0 * uu * du[static_cast<size_t>(l)];
                for (int i = 0; i < fd; ++i)
                    for (int j = 0; j < fd; ++j) d(bd + i, bd + j) = c * gf(i, j);
            }
            for (int l = 0; l < fd; ++l) {
                Mat& d = out[static_cast<size_t>(bd + l)];
                for (int i = 0; i < fd; ++i)
                    for (int j = 0; j < fd; ++j) d(bd + i, bd + j) = uu * uu * df[static_cast<size_t>(l)](i, j);
            }
            return out;
        };
    }

    const MetricChart bmetric = wp.base.metric;
    const SpaceFormSpec fspec = wp.fiber.spec;
    wp.kappa.eval = [bmetric, u, fspec, bd](const Point& p) {
        const Point x(p.begin(), p.begin() + bd);
        const double tau = fspec.has_tau_fn() ? fspec.tau_fn(p[static_cast<size_t>(bd)]) : fspec.tau;
        const double gn = grad_norm_sq(bmetric, u, x);
        const double uu = u.eval(x);
        return (tau - gn) / (uu * uu);
    };
    return wp;
}

QuadraticFormField assemble_q(const WarpedProductSpec& wp) {
    const int bd = wp.base_dim(), fd = wp.fiber_dim();
    const MetricChart bmetric = wp.base.metric;
    const ScalarField u = wp.base.u;
    const auto gF = wp.fiber.metric.g;
    const SpaceFormSpec fspec = wp.fiber.spec;
    QuadraticFormField q;
    q.q = [bmetric, u, gF, fspec, bd, fd](const Point& p) {
        const Point x(p.begin(), p.begin() + bd);
        const Point y(p.begin() + bd, p.end());
        const double uu = u.eval(x);
        if (!(uu > 0.0)) throw DomainError("warping function not positive at q evaluation point");
        const Mat hb = hess_scalar(bmetric, u, x);
        const double gn = grad_norm_sq(bmetric, u, x);
        const double tau = fspec.has_tau_fn() ? fspec.tau_fn(y[0]) : fspec.tau;
        const Mat gf = gF(y);
        Mat out(bd + fd, bd + fd);
        for (int i = 0; i < bd; ++i)
            for (int j = 0; j < bd; ++j) out(i, j) = hb(i, j) / uu;
        for (int i = 0; i < fd; ++i)
            for (int j = 0; j < fd; ++j) out(bd + i, bd + j) = (gn - tau) * gf(i, j);
        return out;
    };
    return q;
}

ScalarField lift_solution(const WarpedProductSpec& wp, const ScalarField& v, double check_tol) {
    if (!v.has_grad() || !v.has_hess())
        throw DomainError("fiber solution needs closed-form derivatives to lift");
    const int bd = wp.base_dim(), fd = wp.fiber_dim();
    const ScalarField u = wp.base.u;
    ScalarField w;
    w.eval = [u, v, bd](const Point& p) {
        return u.eval(Point(p.begin(), p.begin() + bd)) * v.eval(Point(p.begin() + bd, p.end()));
    };
    w.grad = [u, v, bd, fd](const Point& p) {
        const Point x(p.begin(), p.begin() + bd);
        const Point y(p.begin() + bd, p.end());
        const Vec du = u.grad(x);
        const Vec dv = v.grad(y);
        const double uu = u.eval(x), vv = v.eval(y);
        Vec g(static_cast<size_t>(bd + fd));
        for (int i = 0; i < bd; ++i) g[static_cast<size_t>(i)] = vv * du[static_cast<size_t>(i)];
        for (int i = 0; i < fd; ++i) g[static_cast<size_t>(bd + i)] = uu * dv[static_cast<size_t>(i)];
        return g;
    };
    w.hess = [u, v, bd, fd](const Point& p) {
        const Point x(p.begin(), p.begin() + bd);
        const Point y(p.begin() + bd, p.end());
        const Vec du = u.grad(x);
        const Vec dv = v.grad(y);
        const Mat hu = u.hess(x);
        const Mat hv = v.hess(y);
        const double uu = u.eval(x), vv = v.eval(y);
        Mat h(bd + fd, bd + fd);
        for (int i = 0; i < bd; ++i)
            for (int j = 0; j < bd; ++j) h(i, j) = vv * hu(i, j);
        for (int i = 0; i < fd; ++i)
            for (int j = 0; j < fd; ++j) h(bd + i, bd + j) = uu * hv(i, j);
        for (int i = 0; i < bd; ++i)
            for (int j = 0; j < fd; ++j) {
                h(i, bd + j) = du[static_cast<size_t>(i)] * dv[static_cast<size_t>(j)];
                h(bd + j, i) = h(i, bd + j);
            }
        return h;
    };
    // membership spot-check against the assembled block form
    SolutionSpace s{wp.total, assemble_q(wp), {}, {}};
    const auto pts = wp.product_grid(3, 3, 10.0 * kDefaultStep);
    if (!pts.empty()) {
        const double r = residual(s, w, pts);
        if (r >= check_tol)
            throw ConstructionError("lifted function fails the membership residual (" + std::to_string(r) +
                                    "); the fiber function does not solve its system");
    }
    return w;
}

Decomposition decompose(const WarpedProductSpec& wp, const ScalarField& w, int base_count, int fiber_count,
                        double tol) {
    const int bd = wp.base_dim(), fd = wp.fiber_dim();
    std::vector<int> bcounts(static_cast<size_t>(bd), base_count);
    std::vector<int> fcounts(static_cast<size_t>(fd), fiber_count);
    const double margin = 10.0 * kDefaultStep;
    const auto xs = interior_grid(wp.base.metric.chart, bcounts, margin);
    const auto ys = interior_grid(wp.fiber.metric.chart, fcounts, margin);
    if (xs.empty() || ys.empty()) throw DomainError("empty decomposition grid");

    // hypothesis: the mixed block of the covariant Hessian vanishes
    Decomposition out;
    {
        double worst = 0.0;
        for (size_t ix = 0; ix < xs.size(); ix += std::max<size_t>(1, xs.size() / 3))
            for (size_t iy = 0; iy < ys.size(); iy += std::max<size_t>(1, ys.size() / 3)) {
                const Mat h = hess_scalar(wp.total, w, wp.join(xs[ix], ys[iy]));
                for (int i = 0; i < bd; ++i)
                    for (int j = 0; j < fd; ++j) worst = std::max(worst, std::abs(h(i, bd + j)));
            }
        out.mixed_hessian = worst;
        if (worst > 1e-5)
            throw PreconditionError("mixed covariant Hessian does not vanish (" + std::to_string(worst) +
                                    "); the function does not split");
    }

    const Point b0 = xs.front();
    const Point y0 = ys.front();
    const ScalarField u = wp.base.u;
    const double ub0 = u.eval(b0);

    ScalarField v;
    v.eval = [w, b0, ub0](const Point& y) {
        Point p = b0;
        p.insert(p.end(), y.begin(), y.end());
        return w.eval(p) / ub0;
    };
    if (w.has_grad()) v.grad = [w, b0, ub0, bd, fd](const Point& y) {
        Point p = b0;
        p.insert(p.end(), y.begin(), y.end());
        const Vec g = w.grad(p);
        Vec out_g(static_cast<size_t>(fd));
        for (int i = 0; i < fd; ++i) out_g[static_cast<size_t>(i)] = g[static_cast<size_t>(bd + i)] / ub0;
        return out_g;
    };
    if (w.has_hess()) v.hess = [w, b0, ub0, bd, fd](const Point& y) {
        Point p = b0;
        p.insert(p.end(), y.begin(), y.end());
        const Mat h = w.hess(p);
        Mat out_h(fd, fd);
        for (int i = 0; i < fd; ++i)
            for (int j = 0; j < fd; ++j) out_h(i, j) = h(bd + i, bd + j) / ub0;
        return out_h;
    };

    const double vy0 = v.eval(y0);
    ScalarField z;
    z.eval = [w, u, y0, vy0](const Point& x) {
        Point p = x;
        p.insert(p.end(), y0.begin(), y0.end());
        return w.eval(p) - u.eval(x) * vy0;
    };
    if (w.has_grad() && u.has_grad()) z.grad = [w, u, y0, vy0, bd](const Point& x) {
        Point p = x;
        p.insert(p.end(), y0.begin(), y0.end());
        const Vec gw = w.grad(p);
        const Vec gu = u.grad(x);
        Vec out_g(static_cast<size_t>(bd));
        for (int i = 0; i < bd; ++i)
            out_g[static_cast<size_t>(i)] = gw[static_cast<size_t>(i)] - gu[static_cast<size_t>(i)] * vy0;
        return out_g;
    };
    if (w.has_hess() && u.has_hess()) z.hess = [w, u, y0, vy0, bd](const Point& x) {
        Point p = x;
        p.insert(p.end(), y0.begin(), y0.end());
        const Mat hw = w.hess(p);
        const Mat hu = u.hess(x);
        Mat out_h(bd, bd);
        for (int i = 0; i < bd; ++i)
            for (int j = 0; j < bd; ++j) out_h(i, j) = hw(i, j) - hu(i, j) * vy0;
        return out_h;
    };

    double worst = 0.0;
    for (const Point& x : xs)
        for (const Point& y : ys)
            worst = std::max(worst,
                             std::abs(w.eval(wp.join(x, y)) - z.eval(x) - u.eval(x) * v.eval(y)));
    out.consistency = worst;
    if (worst >= tol)
        throw ViolationError("split does not reproduce the function on the grid", worst);
    out.z = std::move(z);
    out.v = std::move(v);
    out.gauge_note = "gauge z(b0) = 0 at the first grid point; representatives unique up to "
                     "(z, v) -> (z + c u, v - c)";
    return out;
}

ExtensionReport check_extension_conditions(const WarpedProductSpec& wp, const ScalarField& z,
                                           const ScalarField& v, int base_count, int fiber_count) {
    const int fd = wp.fiber_dim();
    const double margin = 10.0 * kDefaultStep;
    std::vector<int> bcounts(static_cast<size_t>(wp.base_dim()), base_count);
    std::vector<int> fcounts(static_cast<size_t>(fd), fiber_count);
    const auto xs = interior_grid(wp.base.metric.chart, bcounts, margin);
    const auto ys = interior_grid(wp.fiber.metric.chart, fcounts, margin);

    ExtensionReport rep;
    // (2) z solves the base system
    {
        SolutionSpace sb{wp.base.metric, wp.base.q_B, {}, {}};
        rep.z_residual = residual(sb, z, xs);
    }
    // (3) the fiber equation, in block form and through the mu forms
    const ScalarField u = wp.base.u;
    const QuadraticFormField q = assemble_q(wp);
    for (const Point& x : xs) {
        const double uu = u.eval(x);
        const double gn = grad_norm_sq(wp.base.metric, u, x);
        const double uz_inner = grad_inner(wp.base.metric, u, z, x);
        const double zz = z.eval(x);
        for (const Point& y : ys) {
            const Mat hv = hess_scalar(wp.fiber.metric, v, y);
            const Mat gf = wp.fiber.metric.g(y);
            const double vv = v.eval(y);
            // vertical block of q as a fiber tensor
            const Mat qfull = q.q(wp.join(x, y));
            Mat qvert(fd, fd);
            for (int i = 0; i < fd; ++i)
                for (int j = 0; j < fd; ++j) qvert(i, j) = qfull(wp.base_dim() + i, wp.base_dim() + j);
            const Mat lhs_direct = hv + (qvert.scaled(-1.0) + gf.scaled(gn)).scaled(vv);
            const Mat rhs_direct = qvert.scaled(zz / uu) - gf.scaled(uz_inner);
            const Mat gap_direct = lhs_direct - rhs_direct;
            rep.fiber_residual_direct = std::max(rep.fiber_residual_direct, gap_direct.frobenius());

            const double kap = wp.kappa.eval(wp.join(x, y));
            const double mu_u = kap * uu * uu + gn;
            const double mu_uz = kap * uu * zz + uz_inner;
            const Mat gap_mu = hv + gf.scaled(vv * mu_u) + gf.scaled(mu_uz);
            rep.fiber_residual_mu = std::max(rep.fiber_residual_mu, gap_mu.frobenius());
            rep.forms_agreement = std::max(rep.forms_agreement, (gap_direct - gap_mu).frobenius());
        }
    }
    return rep;
}

double CurvatureCheckReport::max_dev() const {
    return std::max({vertical_ricci_dev, horizontal_ricci_dev, radial_hessian_dev, scalar_dev});
}

CurvatureCheckReport oneill_curvature_check(const WarpedProductSpec& wp, const Point& p, double h) {
    const int bd = wp.base_dim(), fd = wp.fiber_dim();
    const int k = fd;
    const Point x = wp.base_point(p);
    const Point y = wp.fiber_point(p);
    const double tau = wp.tau_at(y);
    const ScalarField u = wp.base.u;
    const double uu = u.eval(x);
    const double gn = grad_norm_sq(wp.base.metric, u, x);
    const double lap = laplacian(wp.base.metric, u, x, h);

    CurvatureCheckReport rep;
    const double rho_fiber = (k - 1) * tau;            // Einstein constant of the fiber
    const double scal_fiber = k * (k - 1) * tau;
    rep.rho_closed = (rho_fiber - uu * lap - (k - 1) * gn) / (uu * uu);

    const CurvatureReport cm = curvature(wp.total, p, h);
    const CurvatureReport cb = curvature(wp.base.metric, x, h);
    rep.scalar_closed = cb.scalar + (scal_fiber - 2.0 * k * uu * lap - k * (k - 1) * gn) / (uu * uu);
    rep.scalar_dev = rel_dev(cm.scalar, rep.scalar_closed);

    const Mat gtot = wp.total.g(p);
    for (int i = 0; i < fd; ++i) {
        const double rho_fd = cm.ricci(bd + i, bd + i) / gtot(bd + i, bd + i);
        rep.vertical_ricci_dev = std::max(rep.vertical_ricci_dev, rel_dev(rho_fd, rep.rho_closed));
    }

    const Mat hu = hess_scalar(wp.base.metric, u, x, h);
    for (int i = 0; i < bd; ++i)
        for (int j = 0; j < bd; ++j) {
            const double closed = cb.ricci(i, j) - (k / uu) * hu(i, j);
            rep.horizontal_ricci_dev = std::max(rep.horizontal_ricci_dev, rel_dev(cm.ricci(i, j), closed));
        }

    // vertical block of Hess_M (u o pi_1) must be (|grad u|^2/u) g|_vertical
    const Mat hm = hess_scalar(wp.total, wp.warping(), p, h);
    for (int i = 0; i < fd; ++i)
        for (int j = 0; j < fd; ++j) {
            const double closed = (gn / uu) * gtot(bd + i, bd + j);
            rep.radial_hessian_dev = std::max(rep.radial_hessian_dev, rel_dev(hm(bd + i, bd + j), closed));
        }
    return rep;
}

TraceRelationReport trace_relation_check(const WarpedProductSpec& wp, const Point& p, double h) {
    const int k = wp.fiber_dim();
    const Point x = wp.base_point(p);
    const Point y = wp.fiber_point(p);
    const ScalarField u = wp.base.u;
    const double uu = u.eval(x);
    const double tau = wp.tau_at(y);
    const double gn = grad_norm_sq(wp.base.metric, u, x, h);
    const double lap = laplacian(wp.base.metric, u, x, h);
    const double kap = (tau - gn) / (uu * uu);

    // tr(Q_B) against the base metric
    const Mat qb = wp.base.q_B.q(x);
    const Mat gb_inv = wp.base.metric.g_inv_at(x);
    double tr_qb = 0.0;
    for (int i = 0; i < wp.base_dim(); ++i)
        for (int j = 0; j < wp.base_dim(); ++j) tr_qb += gb_inv(i, j) * qb(i, j);

    const double rho_fiber = (k - 1) * tau;
    const double rho = (rho_fiber - uu * lap - (k - 1) * gn) / (uu * uu);

    TraceRelationReport rep;
    rep.k = k;
    if (k == 1) {
        const double d1 = std::abs(tr_qb - lap / uu);
        const double d2 = std::abs(lap / uu + rho);
        rep.dev = std::max(d1, d2);
    } else {
        const double tr_q = tr_qb - k * kap;
        rep.dev = std::abs(tr_q + (k * rho + tr_qb) / (k - 1.0));
    }
    return rep;
}

MuForms mu_forms(const WarpedProductSpec& wp, const ScalarField& w1, const ScalarField& w2,
                 const std::vector<Point>& grid) {
    MuForms out;
    double lo1 = 0.0, hi1 = 0.0, lo12 = 0.0, hi12 = 0.0, s1 = 0.0, s12 = 0.0;
    bool first = true;
    for (const Point& p : grid) {
        const double kap = wp.kappa.eval(p);
        const double a = w1.eval(p), b = w2.eval(p);
        const double mu1 = kap * a * a + grad_norm_sq(wp.total, w1, p);
        const double mu12 = kap * a * b + grad_inner(wp.total, w1, w2, p);
        if (first) {
            lo1 = hi1 = mu1;
            lo12 = hi12 = mu12;
            first = false;
        }
        lo1 = std::min(lo1, mu1);
        hi1 = std::max(hi1, mu1);
        lo12 = std::min(lo12, mu12);
        hi12 = std::max(hi12, mu12);
        s1 += mu1;
        s12 += mu12;
    }
    if (grid.empty()) throw DomainError("mu_forms needs a nonempty grid");
    out.mu1_mean = s1 / static_cast<double>(grid.size());
    out.mu1_spread = hi1 - lo1;
    out.mu12_mean = s12 / static_cast<double>(grid.size());
    out.mu12_spread = hi12 - lo12;
    return out;
}

double kappa_base(const WarpedProductSpec& wp, const Point& base_pt) {
    if (wp.base_dim() != 1)
        throw PreconditionError("kappa_base is defined here for one-dimensional bases");
    const Mat qb = wp.base.q_B.q(base_pt);
    const Mat gb = wp.base.metric.g(base_pt);
    return -qb(0, 0) / gb(0, 0);
}

namespace {

// Coordinate gradient of a scalar-valued function over the product chart.
Vec fd_gradient(const std::function<double(const Point&)>& f, const Point& p, double h) {
    Vec g(p.size());
    for (size_t i = 0; i < p.size(); ++i) {
        Point pp = p, pm = p;
        pp[i] += h;
        pm[i] -= h;
        g[i] = (f(pp) - f(pm)) / (2.0 * h);
    }
    return g;
}

} // namespace

MuGradientReport mu_gradient_identities(const WarpedProductSpec& wp, const ScalarField& z, int base_count,
                                        int fiber_count) {
    MuGradientReport rep;
    const double h = kDefaultStep;
    const auto grid = wp.product_grid(base_count, fiber_count, 20.0 * h);
    if (grid.empty()) throw DomainError("empty grid for the gradient identities");

    // membership of z in the base system
    {
        std::vector<int> counts(static_cast<size_t>(wp.base_dim()), base_count);
        const auto xs = interior_grid(wp.base.metric.chart, counts, 20.0 * h);
        SolutionSpace sb{wp.base.metric, wp.base.q_B, {}, {}};
        const double zr = residual(sb, z, xs);
        if (zr > 1e-6)
            throw PreconditionError("z does not solve the base system (residual " + std::to_string(zr) + ")");
    }

    const ScalarField u = wp.base.u;
    const ScalarField uM = wp.warping();
    const ScalarField zM = wp.lift_base(z);
    const ScalarField w = lift_solution(wp, wp.fiber.basis.back());

    auto mu_of = [&wp](const ScalarField& a) {
        return [&wp, a](const Point& p) {
            return wp.kappa.eval(p) * a.eval(p) * a.eval(p) + grad_norm_sq(wp.total, a, p);
        };
    };
    auto mu_pair = [&wp](const ScalarField& a, const ScalarField& b) {
        return [&wp, a, b](const Point& p) {
            return wp.kappa.eval(p) * a.eval(p) * b.eval(p) + grad_inner(wp.total, a, b, p);
        };
    };
    const auto mu_w = mu_of(w);
    const auto mu_u = mu_of(uM);
    const auto mu_uz = mu_pair(uM, zM);

    for (const Point& p : grid) {
        const Vec lhs_lift = fd_gradient(mu_w, p, h);
        const Vec grad_mu_u = fd_gradient(mu_u, p, h);
        const double ratio = std::pow(w.eval(p) / uM.eval(p), 2);
        for (size_t i = 0; i < p.size(); ++i)
            rep.lift_identity_dev =
                std::max(rep.lift_identity_dev, std::abs(lhs_lift[i] - ratio * grad_mu_u[i]));

        const Vec lhs_uz = fd_gradient(mu_uz, p, h);
        const double kap = wp.kappa.eval(p);
        const double kap_b = kappa_base(wp, wp.base_point(p));
        const Vec du = uM.grad_or_fd(p, h);
        const Vec dz = zM.grad_or_fd(p, h);
        const double uu = uM.eval(p), zz = zM.eval(p);
        for (size_t i = 0; i < p.size(); ++i) {
            const double rhs =
                (zz / uu) * grad_mu_u[i] + (kap - kap_b) * (uu * dz[i] - zz * du[i]);
            rep.uz_identity_dev = std::max(rep.uz_identity_dev, std::abs(lhs_uz[i] - rhs));
        }
    }
    return rep;
}

LineFamily line_base_family(const ScalarField& u, const SpaceFormModel& fiber, double t_lo, double t_hi) {
    MetricChart line = euclidean_metric(1, {t_lo}, {t_hi}, "line");
    LineFamily fam{build_warped(make_base_space(line, u), fiber), {},
                   fiber.dim() + 1, false, 0.0};
    fam.q = assemble_q(fam.wp);
    if (!fiber.spec.has_tau_fn()) {
        const double tau = fiber.spec.tau;
        double worst = 0.0;
        for (int i = 0; i <= 64; ++i) {
            const double t = t_lo + (t_hi - t_lo) * i / 64.0;
            const Point x{t};
            const double uu = u.eval(x);
            const double du = u.grad(x)[0];
            const double ddu = u.hess(x)(0, 0);
            // tau/u^2 + (u'/u)' = tau/u^2 + u''/u - (u'/u)^2
            worst = std::max(worst, std::abs(tau / (uu * uu) + ddu / uu - (du / uu) * (du / uu)));
        }
        fam.condition_residual = worst;
        fam.constant_curvature_condition = worst < 1e-8;
    }
    return fam;
}

} // namespace wr
