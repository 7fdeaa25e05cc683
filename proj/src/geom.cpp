#include "wr/geom.hpp"

#include "wr/errors.hpp"

#include <cmath>

namespace wr {

Chart Chart::box(const Vec& lo, const Vec& hi) {
    if (lo.empty() || lo.size() != hi.size()) throw DomainError("chart bounds must be nonempty and matched");
    Chart c;
    c.dim = static_cast<int>(lo.size());
    c.lo = lo;
    c.hi = hi;
    c.periodic.assign(lo.size(), false);
    c.period.assign(lo.size(), 0.0);
    for (size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i])) throw DomainError("chart axis " + std::to_string(i) + " has lower >= upper");
    return c;
}

Chart& Chart::set_periodic(int axis, double period_length) {
    if (!(period_length > 0.0)) throw DomainError("periodic axis needs positive period");
    periodic[static_cast<size_t>(axis)] = true;
    period[static_cast<size_t>(axis)] = period_length;
    return *this;
}

bool Chart::contains(const Point& p) const {
    for (int i = 0; i < dim; ++i) {
        if (is_periodic(i)) continue;
        if (p[static_cast<size_t>(i)] < lo[static_cast<size_t>(i)] ||
            p[static_cast<size_t>(i)] > hi[static_cast<size_t>(i)])
            return false;
    }
    return true;
}

void Chart::require_margin(const Point& p, double margin) const {
    for (int i = 0; i < dim; ++i) {
        if (is_periodic(i)) continue;
        const double x = p[static_cast<size_t>(i)];
        if (x - lo[static_cast<size_t>(i)] < margin || hi[static_cast<size_t>(i)] - x < margin)
            throw MarginError("point too close to boundary on axis " + std::to_string(i) +
                              " for stencil margin " + std::to_string(margin));
    }
}

namespace {

Point shifted(const Point& p, int axis, double d) {
    Point q = p;
    q[static_cast<size_t>(axis)] += d;
    return q;
}

} // namespace

Vec ScalarField::grad_or_fd(const Point& p, double h) const {
    if (grad) return grad(p);
    const int n = static_cast<int>(p.size());
    Vec g(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<size_t>(i)] = (eval(shifted(p, i, h)) - eval(shifted(p, i, -h))) / (2.0 * h);
    return g;
}

Mat ScalarField::hess_or_fd(const Point& p, double h) const {
    if (hess) {
        Mat m = hess(p);
        m.symmetrize();
        return m;
    }
    const int n = static_cast<int>(p.size());
    Mat m(n, n);
    const double f0 = eval(p);
    for (int i = 0; i < n; ++i)
        m(i, i) = (eval(shifted(p, i, h)) - 2.0 * f0 + eval(shifted(p, i, -h))) / (h * h);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = (eval(shifted(shifted(p, i, h), j, h)) - eval(shifted(shifted(p, i, h), j, -h)) -
                              eval(shifted(shifted(p, i, -h), j, h)) + eval(shifted(shifted(p, i, -h), j, -h))) /
                             (4.0 * h * h);
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

ScalarField constant_field(int dim, double c) {
    ScalarField f;
    f.eval = [c](const Point&) { return c; };
    f.grad = [dim](const Point&) { return Vec(static_cast<size_t>(dim), 0.0); };
    f.hess = [dim](const Point&) { return Mat(dim, dim); };
    return f;
}

ScalarField field_from_expr(const Expr& e, const std::vector<std::string>& coords) {
    const int n = static_cast<int>(coords.size());
    std::vector<Expr> g(coords.size());
    std::vector<std::vector<Expr>> hh(coords.size(), std::vector<Expr>(coords.size()));
    for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = diff(e, coords[static_cast<size_t>(i)]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            hh[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                diff(g[static_cast<size_t>(i)], coords[static_cast<size_t>(j)]);
    auto env_of = [coords](const Point& p) {
        Env env;
        for (size_t i = 0; i < coords.size(); ++i) env[coords[i]] = p[i];
        return env;
    };
    ScalarField f;
    f.eval = [e, env_of](const Point& p) { return eval(e, env_of(p)); };
    f.grad = [g, env_of, n](const Point& p) {
        const Env env = env_of(p);
        Vec out(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = eval(g[static_cast<size_t>(i)], env);
        return out;
    };
    f.hess = [hh, env_of, n](const Point& p) {
        const Env env = env_of(p);
        Mat out(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(i, j) = eval(hh[static_cast<size_t>(i)][static_cast<size_t>(j)], env);
        return out;
    };
    return f;
}

ScalarField field_from_expr(const std::string& text, const std::vector<std::string>& coords) {
    return field_from_expr(parse_expr(text), coords);
}

ScalarField scale_field(const ScalarField& f, double c) {
    ScalarField r;
    r.eval = [f, c](const Point& p) { return c * f.eval(p); };
    if (f.has_grad()) r.grad = [f, c](const Point& p) {
        Vec g = f.grad(p);
        for (double& v : g) v *= c;
        return g;
    };
    if (f.has_hess()) r.hess = [f, c](const Point& p) { return f.hess(p).scaled(c); };
    return r;
}

ScalarField add_fields(const ScalarField& f, const ScalarField& g) {
    ScalarField r;
    r.eval = [f, g](const Point& p) { return f.eval(p) + g.eval(p); };
    if (f.has_grad() && g.has_grad()) r.grad = [f, g](const Point& p) {
        Vec a = f.grad(p), b = g.grad(p);
        for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return a;
    };
    if (f.has_hess() && g.has_hess()) r.hess = [f, g](const Point& p) { return f.hess(p) + g.hess(p); };
    return r;
}

Mat MetricChart::g_inv_at(const Point& p, double cond_limit) const {
    Mat gm = g(p);
    try {
        return inverse(gm, cond_limit);
    } catch (const DegeneracyError&) {
        throw DegeneracyError(name + ": metric degenerate/ill-conditioned at sample point");
    }
}

std::vector<Mat> MetricChart::dg_or_fd(const Point& p, double h) const {
    if (dg) return dg(p);
    std::vector<Mat> out(static_cast<size_t>(chart.dim));
    for (int l = 0; l < chart.dim; ++l)
        out[static_cast<size_t>(l)] = (g(shifted(p, l, h)) - g(shifted(p, l, -h))).scaled(1.0 / (2.0 * h));
    return out;
}

MetricChart euclidean_metric(int dim, const Vec& lo, const Vec& hi, const std::string& name) {
    MetricChart m;
    m.chart = Chart::box(lo, hi);
    m.g = [dim](const Point&) { return Mat::identity(dim); };
    m.dg = [dim](const Point&) { return std::vector<Mat>(static_cast<size_t>(dim), Mat(dim, dim)); };
    m.name = name;
    return m;
}

MetricChart metric_from_exprs(Chart chart, const std::vector<std::string>& entries,
                              const std::vector<std::string>& coords, const std::string& name) {
    const int n = chart.dim;
    std::vector<Expr> parsed;
    parsed.reserve(entries.size());
    for (const auto& s : entries) parsed.push_back(parse_expr(s));
    std::vector<std::vector<Expr>> dparsed(static_cast<size_t>(n));
    for (int l = 0; l < n; ++l) {
        dparsed[static_cast<size_t>(l)].reserve(parsed.size());
        for (const Expr& e : parsed)
            dparsed[static_cast<size_t>(l)].push_back(diff(e, coords[static_cast<size_t>(l)]));
    }
    MetricChart m;
    m.chart = std::move(chart);
    m.name = name;
    m.g = [parsed, coords, n](const Point& p) {
        Env env;
        for (size_t i = 0; i < coords.size(); ++i) env[coords[i]] = p[i];
        Mat out(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(i, j) = eval(parsed[static_cast<size_t>(i * n + j)], env);
        return out;
    };
    m.dg = [dparsed, coords, n](const Point& p) {
        Env env;
        for (size_t i = 0; i < coords.size(); ++i) env[coords[i]] = p[i];
        std::vector<Mat> out(static_cast<size_t>(n));
        for (int l = 0; l < n; ++l) {
            Mat d(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    d(i, j) = eval(dparsed[static_cast<size_t>(l)][static_cast<size_t>(i * n + j)], env);
            out[static_cast<size_t>(l)] = d;
        }
        return out;
    };
    return m;
}

double CurvatureReport::christoffel_at(int k, int i, int j) const {
    return christoffel[static_cast<size_t>((k * dim + i) * dim + j)];
}

double CurvatureReport::riemann_at(int i, int j, int k, int l) const {
    return riemann[static_cast<size_t>(((i * dim + j) * dim + k) * dim + l)];
}

double CurvatureReport::riemann_lower(const Mat& g, int i, int j, int k, int l) const {
    double s = 0.0;
    for (int m = 0; m < dim; ++m) s += g(i, m) * riemann_at(m, j, k, l);
    return s;
}

std::vector<double> christoffel(const MetricChart& m, const Point& p, double h) {
    const int n = m.chart.dim;
    m.chart.require_margin(p, 2.0 * h);
    // dg[l](i,j) = d_l g_ij, closed form when the metric supplies it
    const std::vector<Mat> dg = m.dg_or_fd(p, h);
    const Mat ginv = m.g_inv_at(p);
    std::vector<double> gamma(static_cast<size_t>(n * n * n), 0.0);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += ginv(k, l) * (dg[static_cast<size_t>(i)](j, l) + dg[static_cast<size_t>(j)](i, l) -
                                       dg[static_cast<size_t>(l)](i, j));
                s *= 0.5;
                gamma[static_cast<size_t>((k * n + i) * n + j)] = s;
                gamma[static_cast<size_t>((k * n + j) * n + i)] = s; // symmetric lower pair
            }
    return gamma;
}

Mat hess_scalar(const MetricChart& m, const ScalarField& w, const Point& p, double h) {
    const int n = m.chart.dim;
    const auto gamma = christoffel(m, p, h);
    const Vec dw = w.grad_or_fd(p, h);
    Mat hw = w.hess_or_fd(p, h);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double corr = 0.0;
            for (int k = 0; k < n; ++k)
                corr += gamma[static_cast<size_t>((k * n + i) * n + j)] * dw[static_cast<size_t>(k)];
            hw(i, j) -= corr;
        }
    hw.symmetrize();
    return hw;
}

double laplacian(const MetricChart& m, const ScalarField& w, const Point& p, double h) {
    const Mat hw = hess_scalar(m, w, p, h);
    const Mat ginv = m.g_inv_at(p);
    double s = 0.0;
    for (int i = 0; i < m.chart.dim; ++i)
        for (int j = 0; j < m.chart.dim; ++j) s += ginv(i, j) * hw(i, j);
    return s;
}

double grad_norm_sq(const MetricChart& m, const ScalarField& w, const Point& p, double h) {
    return grad_inner(m, w, w, p, h);
}

double grad_inner(const MetricChart& m, const ScalarField& v, const ScalarField& w, const Point& p, double h) {
    const Vec dv = v.grad_or_fd(p, h);
    const Vec dw = w.grad_or_fd(p, h);
    const Mat ginv = m.g_inv_at(p);
    double s = 0.0;
    for (int i = 0; i < m.chart.dim; ++i)
        for (int j = 0; j < m.chart.dim; ++j)
            s += ginv(i, j) * dv[static_cast<size_t>(i)] * dw[static_cast<size_t>(j)];
    return s;
}

CurvatureReport curvature(const MetricChart& m, const Point& p, double h) {
    const int n = m.chart.dim;
    m.chart.require_margin(p, 3.0 * h);
    const auto gamma = christoffel(m, p, h);
    // dgamma[l] = d_l Gamma, central differences of the Christoffel field.
    std::vector<std::vector<double>> dgamma(static_cast<size_t>(n));
    for (int l = 0; l < n; ++l) {
        const auto gp = christoffel(m, shifted(p, l, h), h);
        const auto gm = christoffel(m, shifted(p, l, -h), h);
        auto& d = dgamma[static_cast<size_t>(l)];
        d.resize(gp.size());
        for (size_t t = 0; t < gp.size(); ++t) d[t] = (gp[t] - gm[t]) / (2.0 * h);
    }
    auto G = [&](int k, int i, int j) { return gamma[static_cast<size_t>((k * n + i) * n + j)]; };
    auto dG = [&](int l, int k, int i, int j) {
        return dgamma[static_cast<size_t>(l)][static_cast<size_t>((k * n + i) * n + j)];
    };
    CurvatureReport rep;
    rep.dim = n;
    rep.point = p;
    rep.christoffel = gamma;
    rep.riemann.assign(static_cast<size_t>(n * n * n * n), 0.0);
    // R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj}
    //           + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj}
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double r = dG(k, i, l, j) - dG(l, i, k, j);
                    for (int mm = 0; mm < n; ++mm) r += G(i, k, mm) * G(mm, l, j) - G(i, l, mm) * G(mm, k, j);
                    rep.riemann[static_cast<size_t>(((i * n + j) * n + k) * n + l)] = r;
                }
    rep.ricci = Mat(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += rep.riemann_at(i, j, i, l);
            rep.ricci(j, l) = s;
        }
    rep.ricci.symmetrize();
    const Mat ginv = m.g_inv_at(p);
    rep.scalar = 0.0;
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) rep.scalar += ginv(j, l) * rep.ricci(j, l);
    return rep;
}

Mat lie_derivative_metric(const MetricChart& m, const VectorField& K, const Point& p, double h) {
    const int n = m.chart.dim;
    m.chart.require_margin(p, 2.0 * h);
    const Vec kv = K.eval(p);
    const std::vector<Mat> dg = m.dg_or_fd(p, h);
    Mat dK(n, n); // dK(i,k) = d_i K^k
    for (int i = 0; i < n; ++i) {
        const Vec kp = K.eval(shifted(p, i, h));
        const Vec km = K.eval(shifted(p, i, -h));
        for (int k = 0; k < n; ++k)
            dK(i, k) = (kp[static_cast<size_t>(k)] - km[static_cast<size_t>(k)]) / (2.0 * h);
    }
    const Mat g0 = m.g(p);
    Mat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += kv[static_cast<size_t>(k)] * dg[static_cast<size_t>(k)](i, j) + g0(k, j) * dK(i, k) +
                     g0(i, k) * dK(j, k);
            out(i, j) = s;
        }
    return out;
}

Vec vector_bracket(const VectorField& X, const VectorField& Y, const Point& p, double h) {
    const int n = static_cast<int>(p.size());
    const Vec xv = X.eval(p);
    const Vec yv = Y.eval(p);
    Vec out(static_cast<size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        const Vec yp = Y.eval(shifted(p, k, h));
        const Vec ym = Y.eval(shifted(p, k, -h));
        const Vec xp = X.eval(shifted(p, k, h));
        const Vec xm = X.eval(shifted(p, k, -h));
        for (int i = 0; i < n; ++i) {
            const double dYi = (yp[static_cast<size_t>(i)] - ym[static_cast<size_t>(i)]) / (2.0 * h);
            const double dXi = (xp[static_cast<size_t>(i)] - xm[static_cast<size_t>(i)]) / (2.0 * h);
            out[static_cast<size_t>(i)] += xv[static_cast<size_t>(k)] * dYi - yv[static_cast<size_t>(k)] * dXi;
        }
    }
    return out;
}

std::vector<Point> interior_grid(const Chart& chart, const std::vector<int>& counts, double margin) {
    std::vector<Point> pts;
    std::vector<int> idx(static_cast<size_t>(chart.dim), 0);
    size_t total = 1;
    for (int c : counts) total *= static_cast<size_t>(c);
    pts.reserve(total);
    for (size_t flat = 0; flat < total; ++flat) {
        size_t rem = flat;
        Point p(static_cast<size_t>(chart.dim));
        for (int ax = 0; ax < chart.dim; ++ax) {
            const int c = counts[static_cast<size_t>(ax)];
            const int i = static_cast<int>(rem % static_cast<size_t>(c));
            rem /= static_cast<size_t>(c);
            double a = chart.lo[static_cast<size_t>(ax)];
            double b = chart.hi[static_cast<size_t>(ax)];
            if (!chart.is_periodic(ax)) {
                a += margin;
                b -= margin;
            }
            p[static_cast<size_t>(ax)] = (c == 1) ? 0.5 * (a + b) : a + (b - a) * i / (c - 1.0);
            if (chart.is_periodic(ax) && c > 1) {
                // avoid duplicating the wrap point
                p[static_cast<size_t>(ax)] = a + (b - a) * i / static_cast<double>(c);
            }
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

std::vector<Point> sample_interior(const Chart& chart, int n, double margin, std::mt19937& rng) {
    std::vector<Point> pts;
    pts.reserve(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s) {
        Point p(static_cast<size_t>(chart.dim));
        for (int ax = 0; ax < chart.dim; ++ax) {
            double a = chart.lo[static_cast<size_t>(ax)];
            double b = chart.hi[static_cast<size_t>(ax)];
            if (!chart.is_periodic(ax)) {
                a += margin;
                b -= margin;
            }
            std::uniform_real_distribution<double> u(a, b);
            p[static_cast<size_t>(ax)] = u(rng);
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

} // namespace wr
