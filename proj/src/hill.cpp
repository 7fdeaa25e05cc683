#include "wr/hill.hpp"

#include "wr/errors.hpp"

#include <algorithm>
#include <cmath>

namespace wr {

namespace {

struct State {
    double w, dw;
};

State f_of(const OdeProblem& p, double t, State y) { return {y.dw, p.theta(t) * y.w}; }

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                 e6 = 187.0 / 2100, e7 = 1.0 / 40;

// One direction of integration; appends accepted nodes (excluding the
// start node, which the caller records).
void integrate_dir(const OdeProblem& p, double t0, double t1, State y, double atol, double rtol,
                   double max_step, std::vector<double>& ts, std::vector<State>& ys) {
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    if (span == 0.0) return;
    double h = dir * std::min(max_step, span);
    double t = t0;
    const double hmin = span * 1e-14;
    int guard = 0;
    while (dir * (t1 - t) > 0.0) {
        if (++guard > 2000000) throw IntegrationError("step budget exhausted", t);
        if (dir * (t + h - t1) > 0.0) h = t1 - t;
        const State k1 = f_of(p, t, y);
        const State y2{y.w + h * a21 * k1.w, y.dw + h * a21 * k1.dw};
        const State k2 = f_of(p, t + c2 * h, y2);
        const State y3{y.w + h * (a31 * k1.w + a32 * k2.w), y.dw + h * (a31 * k1.dw + a32 * k2.dw)};
        const State k3 = f_of(p, t + c3 * h, y3);
        const State y4{y.w + h * (a41 * k1.w + a42 * k2.w + a43 * k3.w),
                       y.dw + h * (a41 * k1.dw + a42 * k2.dw + a43 * k3.dw)};
        const State k4 = f_of(p, t + c4 * h, y4);
        const State y5{y.w + h * (a51 * k1.w + a52 * k2.w + a53 * k3.w + a54 * k4.w),
                       y.dw + h * (a51 * k1.dw + a52 * k2.dw + a53 * k3.dw + a54 * k4.dw)};
        const State k5 = f_of(p, t + c5 * h, y5);
        const State y6{y.w + h * (a61 * k1.w + a62 * k2.w + a63 * k3.w + a64 * k4.w + a65 * k5.w),
                       y.dw + h * (a61 * k1.dw + a62 * k2.dw + a63 * k3.dw + a64 * k4.dw + a65 * k5.dw)};
        const State k6 = f_of(p, t + h, y6);
        const State y_new{y.w + h * (b1 * k1.w + b3 * k3.w + b4 * k4.w + b5 * k5.w + b6 * k6.w),
                          y.dw + h * (b1 * k1.dw + b3 * k3.dw + b4 * k4.dw + b5 * k5.dw + b6 * k6.dw)};
        const State k7 = f_of(p, t + h, y_new);
        const State y_low{y.w + h * (e1 * k1.w + e3 * k3.w + e4 * k4.w + e5 * k5.w + e6 * k6.w + e7 * k7.w),
                          y.dw + h * (e1 * k1.dw + e3 * k3.dw + e4 * k4.dw + e5 * k5.dw + e6 * k6.dw + e7 * k7.dw)};
        const double sc_w = atol + rtol * std::max(std::abs(y.w), std::abs(y_new.w));
        const double sc_dw = atol + rtol * std::max(std::abs(y.dw), std::abs(y_new.dw));
        const double ew = (y_new.w - y_low.w) / sc_w;
        const double edw = (y_new.dw - y_low.dw) / sc_dw;
        const double err = std::sqrt(0.5 * (ew * ew + edw * edw));
        if (!std::isfinite(err)) {
            if (std::abs(h) <= hmin) throw IntegrationError("right-hand side blew up", t);
            h *= 0.2;
            continue;
        }
        if (err <= 1.0 || std::abs(h) <= hmin) {
            if (err > 1.0 && std::abs(h) <= hmin)
                throw IntegrationError("step-size underflow (theta blow-up?)", t);
            t += h;
            y = y_new;
            ts.push_back(t);
            ys.push_back(y);
        }
        const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        if (std::abs(h) > max_step) h = dir * max_step;
        if (std::abs(h) < hmin) h = dir * hmin;
    }
}

size_t locate(const std::vector<double>& t, double at) {
    if (t.size() < 2) return 0;
    auto it = std::upper_bound(t.begin(), t.end(), at);
    size_t i = static_cast<size_t>(std::distance(t.begin(), it));
    if (i == 0) return 0;
    if (i >= t.size()) return t.size() - 2;
    return i - 1;
}

} // namespace

double OdeSolution::value(double at) const {
    const size_t i = locate(t, at);
    const double t0 = t[i], t1 = t[i + 1];
    const double h = t1 - t0;
    if (h == 0.0) return w[i];
    const double s = (at - t0) / h;
    // Quintic Hermite from (w, w', w'') at both ends.
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h00 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double h10 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h20 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    const double h01 = 10 * s3 - 15 * s4 + 6 * s5;
    const double h11 = -4 * s3 + 7 * s4 - 3 * s5;
    const double h21 = 0.5 * (s3 - 2 * s4 + s5);
    return h00 * w[i] + h10 * h * dw[i] + h20 * h * h * theta_w[i] + h01 * w[i + 1] + h11 * h * dw[i + 1] +
           h21 * h * h * theta_w[i + 1];
}

double OdeSolution::deriv(double at) const {
    const size_t i = locate(t, at);
    const double t0 = t[i], t1 = t[i + 1];
    const double h = t1 - t0;
    if (h == 0.0) return dw[i];
    const double s = (at - t0) / h;
    // Quintic Hermite on (w', w'', w''') node data.
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h00 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double h10 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h20 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    const double h01 = 10 * s3 - 15 * s4 + 6 * s5;
    const double h11 = -4 * s3 + 7 * s4 - 3 * s5;
    const double h21 = 0.5 * (s3 - 2 * s4 + s5);
    return h00 * dw[i] + h10 * h * theta_w[i] + h20 * h * h * d3w[i] + h01 * dw[i + 1] +
           h11 * h * theta_w[i + 1] + h21 * h * h * d3w[i + 1];
}

ScalarField OdeSolution::as_field() const {
    const OdeSolution self = *this;
    ScalarField f;
    f.eval = [self](const Point& p) { return self.value(p[0]); };
    f.grad = [self](const Point& p) { return Vec{self.deriv(p[0])}; };
    f.hess = [self](const Point& p) { return Mat(1, 1, {self.second(p[0])}); };
    return f;
}

OdeSolution solve_ivp(const OdeProblem& p, double w0, double dw0, double atol, double rtol,
                      std::optional<double> t_init, double max_step) {
    const double ti = t_init.value_or(p.t_lo);
    if (!(std::isfinite(w0) && std::isfinite(dw0))) throw DomainError("non-finite initial data");
    if (ti < p.t_lo || ti > p.t_hi) throw DomainError("initial time outside span");
    std::vector<double> ts_fwd, ts_bwd;
    std::vector<State> ys_fwd, ys_bwd;
    const State y0{w0, dw0};
    integrate_dir(p, ti, p.t_hi, y0, atol, rtol, max_step, ts_fwd, ys_fwd);
    integrate_dir(p, ti, p.t_lo, y0, atol, rtol, max_step, ts_bwd, ys_bwd);
    OdeSolution s;
    s.theta = p.theta;
    s.t_lo = p.t_lo;
    s.t_hi = p.t_hi;
    const size_t n = ts_bwd.size() + 1 + ts_fwd.size();
    s.t.reserve(n);
    s.w.reserve(n);
    s.dw.reserve(n);
    for (size_t i = ts_bwd.size(); i-- > 0;) {
        s.t.push_back(ts_bwd[i]);
        s.w.push_back(ys_bwd[i].w);
        s.dw.push_back(ys_bwd[i].dw);
    }
    s.t.push_back(ti);
    s.w.push_back(w0);
    s.dw.push_back(dw0);
    for (size_t i = 0; i < ts_fwd.size(); ++i) {
        s.t.push_back(ts_fwd[i]);
        s.w.push_back(ys_fwd[i].w);
        s.dw.push_back(ys_fwd[i].dw);
    }
    s.theta_w.resize(s.t.size());
    s.d3w.resize(s.t.size());
    for (size_t i = 0; i < s.t.size(); ++i) {
        const double th = p.theta(s.t[i]);
        s.theta_w[i] = th * s.w[i];
        // w''' = theta' w + theta w'; theta' by a narrow central difference
        const double dth = (p.theta(s.t[i] + 5e-6) - p.theta(s.t[i] - 5e-6)) / 1e-5;
        s.d3w[i] = dth * s.w[i] + th * s.dw[i];
    }
    return s;
}

double wronskian(const OdeSolution& s1, const OdeSolution& s2, double at) {
    return s2.deriv(at) * s1.value(at) - s2.value(at) * s1.deriv(at);
}

double wronskian_spread(const OdeSolution& s1, const OdeSolution& s2, int samples) {
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double t = s1.t_lo + (s1.t_hi - s1.t_lo) * i / static_cast<double>(samples);
        const double w = wronskian(s1, s2, t);
        if (i == 0) lo = hi = w;
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    return hi - lo;
}

Mat monodromy(const OdeProblem& p) {
    if (!p.period) throw PreconditionError("monodromy needs a declared period");
    const double T = *p.period;
    if (!(T > 0.0)) throw PreconditionError("period must be positive");
    // sample-check periodicity of theta
    for (int i = 0; i < 64; ++i) {
        const double t = T * i / 64.0;
        const double a = p.theta(t), b = p.theta(t + T);
        if (std::abs(a - b) > 1e-8 * (1.0 + std::abs(a)))
            throw PreconditionError("theta is not periodic with the declared period");
    }
    OdeProblem q = p;
    q.t_lo = 0.0;
    q.t_hi = T;
    const OdeSolution s1 = solve_ivp(q, 1.0, 0.0);
    const OdeSolution s2 = solve_ivp(q, 0.0, 1.0);
    Mat m(2, 2);
    m(0, 0) = s1.w.back();
    m(1, 0) = s1.dw.back();
    m(0, 1) = s2.w.back();
    m(1, 1) = s2.dw.back();
    return m;
}

CoexistenceReport coexistence(const OdeProblem& p) {
    const Mat m = monodromy(p);
    CoexistenceReport rep;
    rep.mono = m;
    const Mat id = Mat::identity(2);
    const double dev_plus = (m - id).max_abs();
    const double dev_minus = (m + id).max_abs();
    if (dev_plus < 1e-8) {
        rep.verdict = Coexistence::all_periodic;
        rep.periodic_dim = 2;
        return rep;
    }
    if (dev_minus < 1e-8) {
        rep.verdict = Coexistence::all_periodic;
        rep.periodic_dim = 2;
        rep.antiperiodic = true;
        return rep;
    }
    // dim ker(M - I) via singular values
    const Mat shifted = m - id;
    const Vec sv = singular_values(shifted);
    int kdim = 0;
    for (double s : sv)
        if (s < 1e-8 * std::max(1.0, sv[0])) ++kdim;
    rep.periodic_dim = kdim;
    rep.verdict = (kdim >= 1) ? Coexistence::one_periodic_ray : Coexistence::none;
    return rep;
}

MonotoneRatioWitness positive_excludes_allperiodic(const OdeSolution& s1, const OdeSolution& s2, int samples) {
    MonotoneRatioWitness wit;
    double max_v1sq = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double t = s1.t_lo + (s1.t_hi - s1.t_lo) * i / static_cast<double>(samples);
        const double v1 = s1.value(t);
        if (!(v1 > 0.0)) throw PreconditionError("first solution is not positive on the span");
        max_v1sq = std::max(max_v1sq, v1 * v1);
        wit.t.push_back(t);
        wit.ratio.push_back(s2.value(t) / v1);
    }
    wit.wronskian = wronskian(s1, s2, 0.5 * (s1.t_lo + s1.t_hi));
    if (std::abs(wit.wronskian) < 1e-12)
        throw PreconditionError("solutions are dependent (zero Wronskian)");
    wit.min_slope = std::abs(wit.wronskian) / max_v1sq;
    wit.monotone = true;
    for (size_t i = 0; i + 1 < wit.ratio.size(); ++i) {
        const double d = (wit.ratio[i + 1] - wit.ratio[i]) * (wit.wronskian > 0 ? 1.0 : -1.0);
        if (d <= 0.0) wit.monotone = false;
    }
    return wit;
}

namespace {

MetricChart profile_surface_metric(const ScalarField& v, double t_lo, double t_hi, const std::string& name) {
    MetricChart m;
    m.chart = Chart::box({t_lo, -3.0}, {t_hi, 3.0});
    m.g = [v](const Point& p) {
        const double vv = v.eval({p[0]});
        return Mat(2, 2, {1.0, 0.0, 0.0, vv * vv});
    };
    if (v.has_grad())
        m.dg = [v](const Point& p) {
            const Point t{p[0]};
            const double c = 2.0 * v.eval(t) * v.grad(t)[0];
            return std::vector<Mat>{Mat(2, 2, {0.0, 0.0, 0.0, c}), Mat(2, 2)};
        };
    m.name = name;
    return m;
}

} // namespace

MetricChart SurfacePair::metric1() const { return profile_surface_metric(v1, t_lo, t_hi, "surface_1"); }

MetricChart SurfacePair::metric2() const { return profile_surface_metric(v2, t_lo, t_hi, "surface_2"); }

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    struct Rec {
        const std::function<double(double)>& f;
        double tol;
        int max_depth = 40;
        double simpson(double x0, double x2, double f0, double f1, double f2) const {
            return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2);
        }
        double go(double x0, double x2, double f0, double f1, double f2, double whole, double eps,
                  int depth) const {
            const double xm = 0.5 * (x0 + x2);
            const double xl = 0.5 * (x0 + xm), xr = 0.5 * (xm + x2);
            const double fl = f(xl), fr = f(xr);
            const double left = simpson(x0, xm, f0, fl, f1);
            const double right = simpson(xm, x2, f1, fr, f2);
            const double delta = left + right - whole;
            if (depth >= max_depth || std::abs(delta) <= 15.0 * eps)
                return left + right + delta / 15.0;
            return go(x0, xm, f0, fl, f1, left, 0.5 * eps, depth + 1) +
                   go(xm, x2, f1, fr, f2, right, 0.5 * eps, depth + 1);
        }
    };
    if (a == b) return 0.0;
    Rec r{f, tol};
    const double fm = f(0.5 * (a + b));
    const double fa = f(a), fb = f(b);
    const double whole = r.simpson(a, b, fa, fm, fb);
    return r.go(a, b, fa, fm, fb, whole, tol, 0);
}

namespace {

// Cumulative integral of f from 0, precomputed per segment of a uniform
// breakpoint grid so field evaluation stays cheap and deterministic.
struct CumulativeIntegral {
    std::vector<double> knots, cum;
    std::function<double(double)> f;

    CumulativeIntegral(std::function<double(double)> fn, double lo, double hi, int segments) : f(std::move(fn)) {
        knots.resize(static_cast<size_t>(segments) + 1);
        for (int i = 0; i <= segments; ++i) knots[static_cast<size_t>(i)] = lo + (hi - lo) * i / segments;
        // cum is anchored at knots[0]; the public accessor re-anchors at 0.
        cum.assign(knots.size(), 0.0);
        for (size_t i = 0; i + 1 < knots.size(); ++i)
            cum[i + 1] = cum[i] + integrate(f, knots[i], knots[i + 1], 1e-13);
        offset_ = value_raw(0.0);
    }

    double value_raw(double x) const {
        const size_t i = locate(knots, x);
        return cum[i] + integrate(f, knots[i], x, 1e-13);
    }

    // integral from 0 to x
    double operator()(double x) const { return value_raw(x) - offset_; }

private:
    double offset_ = 0.0;
};

} // namespace

IsocurvedBuild build_isocurved_pair(const ScalarField& v1, double c2, double t_lo, double t_hi,
                                    std::optional<double> tail_bound) {
    if (!(t_lo < 0.0 && t_hi > 0.0)) throw DomainError("window must contain the anchor t = 0");
    auto inv_sq = [v1](double t) {
        const double v = v1.eval({t});
        return 1.0 / (v * v);
    };
    for (int i = 0; i <= 512; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / 512.0;
        if (!(v1.eval({t}) > 0.0)) throw DomainError("v1 must be positive on the window");
    }
    auto cumulative = std::make_shared<CumulativeIntegral>(inv_sq, t_lo, t_hi, 512);

    IsocurvedBuild out;
    // u is increasing, so positivity on (-inf, t_hi] is governed by the
    // left edge and the declared tail mass.
    const double u_edge = (*cumulative)(t_lo) + c2;
    out.window_edge_value = u_edge;
    double u_minus_inf = u_edge;
    if (tail_bound) {
        if (*tail_bound < 0.0) throw DomainError("tail bound must be nonnegative");
        u_minus_inf -= *tail_bound;
        out.tail_checked = true;
        out.note = "positivity checked with declared tail bound";
    } else {
        out.note = "positivity checked on the finite window only (no tail bound supplied)";
    }
    if (!(u_minus_inf >= 0.0))
        throw ConstructionError("positivity condition fails: u at the window edge = " +
                                std::to_string(u_minus_inf));

    ScalarField u_fld;
    u_fld.eval = [cumulative, c2](const Point& p) { return (*cumulative)(p[0]) + c2; };
    u_fld.grad = [v1](const Point& p) { return Vec{1.0 / std::pow(v1.eval(p), 2)}; };
    u_fld.hess = [v1](const Point& p) {
        const double v = v1.eval(p);
        const double dv = v1.grad(p)[0];
        return Mat(1, 1, {-2.0 * dv / (v * v * v)});
    };

    SurfacePair pair;
    pair.v1 = v1;
    pair.t_lo = t_lo;
    pair.t_hi = t_hi;
    {
        ScalarField v2;
        v2.eval = [v1, u_fld](const Point& p) { return v1.eval(p) * u_fld.eval(p); };
        v2.grad = [v1, u_fld](const Point& p) {
            const double v = v1.eval(p), dv = v1.grad(p)[0];
            const double u = u_fld.eval(p), du = u_fld.grad(p)[0];
            return Vec{dv * u + v * du};
        };
        v2.hess = [v1, u_fld](const Point& p) {
            const double v = v1.eval(p), dv = v1.grad(p)[0], d2v = v1.hess(p)(0, 0);
            const double u = u_fld.eval(p), du = u_fld.grad(p)[0], d2u = u_fld.hess(p)(0, 0);
            return Mat(1, 1, {d2v * u + 2.0 * dv * du + v * d2u});
        };
        pair.v2 = v2;
    }
    pair.tau = [v1](double t) {
        const Point p{t};
        return -v1.hess(p)(0, 0) / v1.eval(p);
    };

    // pair invariants on the 512-point check grid
    double wlo = 0.0, whi = 0.0, curv = 0.0;
    for (int i = 0; i <= 512; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / 512.0;
        const Point p{t};
        const double a1 = pair.v1.eval(p), a2 = pair.v2.eval(p);
        if (!(a2 > 0.0)) throw ConstructionError("constructed v2 is not positive on the window");
        const double d1 = pair.v1.grad(p)[0], d2 = pair.v2.grad(p)[0];
        const double s1 = pair.v1.hess(p)(0, 0), s2 = pair.v2.hess(p)(0, 0);
        const double w = d2 * a1 - a2 * d1;
        if (i == 0) wlo = whi = w;
        wlo = std::min(wlo, w);
        whi = std::max(whi, w);
        curv = std::max(curv, std::abs((-s1 / a1) - (-s2 / a2)));
    }
    pair.wronskian_value = 0.5 * (wlo + whi);
    pair.wronskian_spread = whi - wlo;
    pair.curvature_match = curv;
    if (std::abs(pair.wronskian_value) < 1e-10)
        throw ConstructionError("pair Wronskian is numerically zero");
    out.pair = pair;
    return out;
}

NonIsometryReport non_isometry_witness(const SurfacePair& pair, int samples) {
    NonIsometryReport rep;
    rep.wronskian = pair.wronskian_value;
    if (std::abs(pair.wronskian_value) < 1e-10) {
        rep.verdict = "inconclusive";
        rep.reason = "zero Wronskian: the two profiles are dependent and the surfaces differ "
                     "at most by a fiber rescaling";
        return rep;
    }
    // find the longest run where tau is strictly monotone
    std::vector<double> ts(static_cast<size_t>(samples) + 1), taus(static_cast<size_t>(samples) + 1);
    double tau_scale = 0.0;
    for (int i = 0; i <= samples; ++i) {
        ts[static_cast<size_t>(i)] = pair.t_lo + (pair.t_hi - pair.t_lo) * i / static_cast<double>(samples);
        taus[static_cast<size_t>(i)] = pair.tau(ts[static_cast<size_t>(i)]);
        tau_scale = std::max(tau_scale, std::abs(taus[static_cast<size_t>(i)]));
    }
    const double eps = 1e-9 * std::max(1.0, tau_scale);
    size_t best_lo = 0, best_hi = 0;
    size_t run_lo = 0;
    int run_sign = 0;
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
        const double d = taus[i + 1] - taus[i];
        const int sign = (d > eps) ? 1 : (d < -eps) ? -1 : 0;
        if (sign != 0 && sign == run_sign) {
            if (i + 1 - run_lo > best_hi - best_lo) {
                best_lo = run_lo;
                best_hi = i + 1;
            }
        } else {
            run_lo = i;
            run_sign = sign;
            if (sign != 0 && 1 > best_hi - best_lo) {
                best_lo = i;
                best_hi = i + 1;
            }
        }
    }
    const size_t min_run = static_cast<size_t>(samples) / 10;
    if (best_hi - best_lo < std::max<size_t>(min_run, 4)) {
        rep.verdict = "inconclusive";
        rep.reason = "tau is not strictly monotone on any usable sub-window";
        return rep;
    }
    // shrink 10% into the run
    const double span = ts[best_hi] - ts[best_lo];
    rep.window_lo = ts[best_lo] + 0.1 * span;
    rep.window_hi = ts[best_hi] - 0.1 * span;
    double mn = 0.0, mx = 0.0;
    bool first = true;
    for (int i = 0; i <= samples; ++i) {
        const double t = rep.window_lo + (rep.window_hi - rep.window_lo) * i / static_cast<double>(samples);
        const Point p{t};
        const double gap =
            std::abs(pair.v1.grad(p)[0] / pair.v1.eval(p) - pair.v2.grad(p)[0] / pair.v2.eval(p));
        if (first) {
            mn = mx = gap;
            first = false;
        }
        mn = std::min(mn, gap);
        mx = std::max(mx, gap);
    }
    rep.min_log_slope_gap = mn;
    rep.max_log_slope_gap = mx;
    if (mn > 1e-8) {
        rep.conclusive = true;
        rep.verdict = "not isometric";
        rep.reason = "logarithmic derivatives differ on a tau-monotone window and the Wronskian "
                     "is a nonzero constant";
    } else {
        rep.verdict = "inconclusive";
        rep.reason = "logarithmic derivative gap not bounded away from zero";
    }
    return rep;
}

} // namespace wr
