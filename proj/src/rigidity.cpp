#include "wr/rigidity.hpp"

#include "wr/errors.hpp"
#include "wr/spaceform.hpp"

#include <algorithm>
#include <cmath>

namespace wr {

WedgeElement WedgeElement::basis(int i, int j) {
    WedgeElement z;
    z.add(1.0, i, j);
    return z;
}

WedgeElement& WedgeElement::add(double coeff, int i, int j) {
    if (i == j || coeff == 0.0) return *this;
    if (i > j) {
        std::swap(i, j);
        coeff = -coeff;
    }
    for (Term& t : terms)
        if (t.i == i && t.j == j) {
            t.coeff += coeff;
            if (t.coeff == 0.0) terms.erase(terms.begin() + (&t - terms.data()));
            return *this;
        }
    terms.push_back({coeff, i, j});
    return *this;
}

WedgeElement WedgeElement::scaled(double s) const {
    WedgeElement z;
    for (const Term& t : terms) z.add(s * t.coeff, t.i, t.j);
    return z;
}

WedgeElement WedgeElement::plus(const WedgeElement& o) const {
    WedgeElement z = *this;
    for (const Term& t : o.terms) z.add(t.coeff, t.i, t.j);
    return z;
}

double WedgeElement::max_coeff() const {
    double m = 0.0;
    for (const Term& t : terms) m = std::max(m, std::abs(t.coeff));
    return m;
}

namespace {

VectorField killing_field(const MetricChart& metric, const ScalarField& v, const ScalarField& w) {
    VectorField k;
    k.eval = [metric, v, w](const Point& p) {
        const Mat ginv = metric.g_inv_at(p);
        const Vec dv = v.grad_or_fd(p);
        const Vec dw = w.grad_or_fd(p);
        const double a = v.eval(p), b = w.eval(p);
        Vec covec(dv.size());
        for (size_t i = 0; i < dv.size(); ++i) covec[i] = a * dw[i] - b * dv[i];
        return ginv.apply(covec);
    };
    return k;
}

} // namespace

VectorField iota(const SolutionSpace& s, const ScalarField& v, const ScalarField& w,
                 const std::vector<Point>& check_points, double killing_tol) {
    VectorField k = killing_field(s.manifold, v, w);
    for (const Point& p : check_points) {
        const double res = lie_derivative_metric(s.manifold, k, p).max_abs();
        if (res > killing_tol)
            throw ViolationError("field is not Killing to tolerance; v and w do not solve a common system",
                                 res);
    }
    return k;
}

VectorField iota_wedge(const SolutionSpace& s, const WedgeElement& z) {
    std::vector<VectorField> parts;
    std::vector<double> coeffs;
    for (const auto& t : z.terms) {
        parts.push_back(killing_field(s.manifold, s.basis[static_cast<size_t>(t.i)],
                                      s.basis[static_cast<size_t>(t.j)]));
        coeffs.push_back(t.coeff);
    }
    const int dim = s.manifold.chart.dim;
    VectorField out;
    out.eval = [parts, coeffs, dim](const Point& p) {
        Vec acc(static_cast<size_t>(dim), 0.0);
        for (size_t k = 0; k < parts.size(); ++k) {
            const Vec v = parts[k].eval(p);
            for (size_t i = 0; i < acc.size(); ++i) acc[i] += coeffs[k] * v[i];
        }
        return acc;
    };
    return out;
}

MuEndomorphism wedge_endomorphism(const Mat& gram, const WedgeElement& z) {
    const int n = gram.rows();
    {
        const Vec sv = singular_values(gram);
        int nullity = 0;
        for (double s : sv)
            if (sv[0] == 0.0 || s < 1e-8 * sv[0]) ++nullity;
        if (nullity > 1)
            throw DegeneracyError("mu Gram matrix has nullity > 1; the association is not faithful");
    }
    MuEndomorphism e;
    e.source = z;
    e.matrix = Mat(n, n);
    // L(x) = G(e_j, x) e_i - G(e_i, x) e_j per term, i.e. rows of G.
    for (const auto& t : z.terms)
        for (int b = 0; b < n; ++b) {
            e.matrix(t.i, b) += t.coeff * gram(t.j, b);
            e.matrix(t.j, b) -= t.coeff * gram(t.i, b);
        }
    return e;
}

WedgeElement bracket_wedge(const Mat& gram, const WedgeElement& z1, const WedgeElement& z2) {
    WedgeElement out;
    for (const auto& s : z1.terms)
        for (const auto& t : z2.terms) {
            const double c = s.coeff * t.coeff;
            const int a = s.i, b = s.j, cc = t.i, d = t.j;
            out.add(-c * gram(a, cc), b, d);
            out.add(c * gram(a, d), b, cc);
            out.add(c * gram(cc, b), a, d);
            out.add(-c * gram(b, d), a, cc);
        }
    return out;
}

double homomorphism_check(const SolutionSpace& s, const Mat& gram, const WedgeElement& z1,
                          const WedgeElement& z2, const std::vector<Point>& points) {
    const VectorField x1 = iota_wedge(s, z1);
    const VectorField x2 = iota_wedge(s, z2);
    const VectorField x3 = iota_wedge(s, bracket_wedge(gram, z1, z2));
    double worst = 0.0;
    for (const Point& p : points) {
        const Vec lhs = vector_bracket(x1, x2, p);
        const Vec rhs = x3.eval(p);
        for (size_t i = 0; i < lhs.size(); ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    }
    return worst;
}

EinsteinPairSpec swapped(const EinsteinPairSpec& spec) {
    EinsteinPairSpec s = spec;
    std::swap(s.w1, s.w2);
    std::swap(s.kappa1, s.kappa2);
    return s;
}

RicciRestrictionReport ricci_restriction_check(const EinsteinPairSpec& spec, const std::vector<Point>& grid,
                                               double h) {
    RicciRestrictionReport rep;
    const MetricChart m = spec.M;
    const ScalarField w1 = spec.w1, w2 = spec.w2;
    for (const Point& p : grid) {
        const double a = w1.eval(p), b = w2.eval(p);
        if (!(a > 0.0) || !(b > 0.0)) throw DomainError("pair functions must be positive on the grid");
        const Mat q1 = hess_scalar(m, w1, p, h).scaled(1.0 / a);
        const Mat q2 = hess_scalar(m, w2, p, h).scaled(1.0 / b);
        const double scale = std::max({1.0, q1.max_abs(), q2.max_abs()});
        rep.max_dev = std::max(rep.max_dev, (q1 - q2).max_abs() / scale);
    }
    rep.q.q = [m, w1, h](const Point& p) { return hess_scalar(m, w1, p, h).scaled(1.0 / w1.eval(p)); };
    SolutionSpace s{spec.M, rep.q, {spec.w1, spec.w2}, {}};
    rep.rank = evaluation_rank(s, grid[grid.size() / 2], h);
    rep.dependent = rep.rank < 2;
    return rep;
}

ScalarEqualityReport scalar_equality_check(const MetricChart& fiber, const ScalarField& v1,
                                           const ScalarField& v2, int d, double kappa1, double kappa2,
                                           const std::vector<Point>& grid, double h) {
    ScalarEqualityReport rep;
    if (d == 1) {
        rep.vacuous = true; // the (d-1) factor kills both sides
        return rep;
    }
    for (const Point& p : grid) {
        const double a = v1.eval(p), b = v2.eval(p);
        const double lhs = (d - 1) * (kappa1 - grad_norm_sq(fiber, v1, p, h)) / (a * a);
        const double rhs = (d - 1) * (kappa2 - grad_norm_sq(fiber, v2, p, h)) / (b * b);
        rep.max_gap = std::max(rep.max_gap, std::abs(lhs - rhs));
    }
    return rep;
}

FiberRicciValue fiber_ricci(const MetricChart& fiber, double tau, int k, const ScalarField& v, int d,
                            double kappa_i, const Point& fiber_pt, bool vertical, double h) {
    FiberRicciValue out;
    const double vv = v.eval(fiber_pt);
    if (vertical) {
        out.closed = k * tau + (d - 1) * (kappa_i - grad_norm_sq(fiber, v, fiber_pt, h)) / (vv * vv);
    } else {
        // horizontal: Ric^F + tau d g_F with Ric^F = (k-1) tau g_F
        out.closed = (k - 1) * tau + tau * d;
    }

    // FD cross-check on the assembled metric g_F + v^2 h_i
    const MetricChart n_chart = space_form_metric(kappa_i, d, "extension_fiber");
    const int kf = fiber.chart.dim, kn = n_chart.chart.dim;
    Vec lo = fiber.chart.lo, hi = fiber.chart.hi;
    lo.insert(lo.end(), n_chart.chart.lo.begin(), n_chart.chart.lo.end());
    hi.insert(hi.end(), n_chart.chart.hi.begin(), n_chart.chart.hi.end());
    Chart total = Chart::box(lo, hi);
    for (int i = 0; i < kf; ++i)
        if (fiber.chart.is_periodic(i)) total.set_periodic(i, fiber.chart.period[static_cast<size_t>(i)]);
    for (int i = 0; i < kn; ++i)
        if (n_chart.chart.is_periodic(i))
            total.set_periodic(kf + i, n_chart.chart.period[static_cast<size_t>(i)]);
    MetricChart assembled;
    assembled.chart = total;
    assembled.name = "assembled_fiber";
    const auto gF = fiber.g;
    const auto gN = n_chart.g;
    assembled.g = [gF, gN, v, kf, kn](const Point& p) {
        const Point y(p.begin(), p.begin() + kf);
        const Point z(p.begin() + kf, p.end());
        const Mat a = gF(y);
        const Mat b = gN(z);
        const double s = v.eval(y);
        Mat g(kf + kn, kf + kn);
        for (int i = 0; i < kf; ++i)
            for (int j = 0; j < kf; ++j) g(i, j) = a(i, j);
        for (int i = 0; i < kn; ++i)
            for (int j = 0; j < kn; ++j) g(kf + i, kf + j) = s * s * b(i, j);
        return g;
    };
    Point p = fiber_pt;
    for (int i = 0; i < kn; ++i)
        p.push_back(0.5 * (n_chart.chart.lo[static_cast<size_t>(i)] + n_chart.chart.hi[static_cast<size_t>(i)]));
    const CurvatureReport rep = curvature(assembled, p, h);
    const Mat g = assembled.g(p);
    if (vertical) {
        out.fd = rep.ricci(kf, kf) / g(kf, kf);
    } else {
        out.fd = rep.ricci(0, 0) / g(0, 0);
    }
    return out;
}

std::string to_string(PairVerdict v) {
    switch (v) {
        case PairVerdict::Isometric: return "Isometric";
        case PairVerdict::ExceptionalSurfacePair: return "ExceptionalSurfacePair";
        case PairVerdict::HypothesisFailed: return "HypothesisFailed";
    }
    return "?";
}

namespace {

bool chart_compact(const Chart& c) {
    for (int i = 0; i < c.dim; ++i)
        if (!c.is_periodic(i)) return false;
    return true;
}

SurfacePair make_surface_pair(const ScalarField& v1, const ScalarField& v2, double t_lo, double t_hi) {
    SurfacePair pair;
    pair.v1 = v1;
    pair.v2 = v2;
    pair.t_lo = t_lo;
    pair.t_hi = t_hi;
    pair.tau = [v1](double t) {
        const Point p{t};
        return -v1.hess_or_fd(p)(0, 0) / v1.eval(p);
    };
    double wlo = 0.0, whi = 0.0, curv = 0.0;
    for (int i = 0; i <= 512; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / 512.0;
        const Point p{t};
        const double a1 = v1.eval(p), a2 = v2.eval(p);
        const double d1 = v1.grad_or_fd(p)[0], d2 = v2.grad_or_fd(p)[0];
        const double s1 = v1.hess_or_fd(p)(0, 0), s2 = v2.hess_or_fd(p)(0, 0);
        const double w = d2 * a1 - a2 * d1;
        if (i == 0) wlo = whi = w;
        wlo = std::min(wlo, w);
        whi = std::max(whi, w);
        curv = std::max(curv, std::abs((-s1 / a1) - (-s2 / a2)));
    }
    pair.wronskian_value = 0.5 * (wlo + whi);
    pair.wronskian_spread = whi - wlo;
    pair.curvature_match = curv;
    return pair;
}

// Constant-curvature certification of a surface dt^2 + w(t)^2 dx^2 by FD
// Gauss curvature; returns (mean, spread).
std::pair<double, double> surface_curvature(const MetricChart& m, int samples) {
    double lo = 0.0, hi = 0.0, sum = 0.0;
    bool first = true;
    const Chart& c = m.chart;
    const double margin = 20.0 * kDefaultStep;
    for (int i = 0; i < samples; ++i) {
        Point p{c.lo[0] + margin + (c.hi[0] - c.lo[0] - 2 * margin) * i / (samples - 1.0),
                0.5 * (c.lo[1] + c.hi[1])};
        const double K = 0.5 * curvature(m, p).scalar;
        if (first) {
            lo = hi = K;
            first = false;
        }
        lo = std::min(lo, K);
        hi = std::max(hi, K);
        sum += K;
    }
    return {sum / samples, hi - lo};
}

ClassifyReport classify_dim1(const EinsteinPairSpec& spec, const RicciRestrictionReport& rr,
                             const std::vector<Point>& grid) {
    ClassifyReport rep;
    rep.k = 1;
    // tau(t) = -Q(t) on the one-dimensional core
    double lo = 0.0, hi = 0.0, sum = 0.0;
    bool first = true;
    for (const Point& p : grid) {
        const double tau = -rr.q.q(p)(0, 0) / spec.M.g(p)(0, 0);
        if (first) {
            lo = hi = tau;
            first = false;
        }
        lo = std::min(lo, tau);
        hi = std::max(hi, tau);
        sum += tau;
    }
    rep.tau_mean = sum / static_cast<double>(grid.size());
    rep.tau_spread = hi - lo;
    rep.tau_constant = rep.tau_spread < 1e-6;

    if (chart_compact(spec.M.chart) && !rep.tau_constant)
        throw ViolationError("numerical red flag: nonconstant characteristic on a compact core; "
                             "two independent positive periodic solutions cannot coexist",
                             rep.tau_spread);

    if (rep.tau_constant) {
        // constant-curvature extensions; certify both total spaces agree
        rep.stage = "case_B1";
        if (spec.d == 1) {
            const SurfacePair pair =
                make_surface_pair(spec.w1, spec.w2, spec.M.chart.lo[0], spec.M.chart.hi[0]);
            const auto c1 = surface_curvature(pair.metric1(), 9);
            const auto c2 = surface_curvature(pair.metric2(), 9);
            rep.curvature_gap = std::max({std::abs(c1.first - c2.first), c1.second, c2.second});
            if (rep.curvature_gap < 1e-4) {
                rep.verdict = PairVerdict::Isometric;
                rep.detail = "both extensions have the same constant curvature " + std::to_string(c1.first);
            } else {
                rep.verdict = PairVerdict::HypothesisFailed;
                rep.stage = "curvature_certification";
                rep.detail = "total-space curvatures do not match";
            }
        } else {
            // d >= 2 with constant tau: Einstein-factor certification
            const Point mid = grid[grid.size() / 2];
            const FiberRicciValue f1 =
                fiber_ricci(spec.M, rep.tau_mean, 1, spec.w1, spec.d, spec.kappa1, mid, true);
            const FiberRicciValue f2 =
                fiber_ricci(spec.M, rep.tau_mean, 1, spec.w2, spec.d, spec.kappa2, mid, true);
            rep.curvature_gap = std::abs(f1.closed - f2.closed);
            if (rep.curvature_gap < 1e-4) {
                rep.verdict = PairVerdict::Isometric;
                rep.detail = "matching Einstein factors of the assembled fibers";
            } else {
                rep.verdict = PairVerdict::HypothesisFailed;
                rep.stage = "scalar_equality";
                rep.detail = "assembled fibers have different Einstein factors";
            }
        }
        return rep;
    }

    // nonconstant characteristic
    if (spec.d >= 2) {
        std::vector<Point> fg = grid;
        const ScalarEqualityReport se =
            scalar_equality_check(spec.M, spec.w1, spec.w2, spec.d, spec.kappa1, spec.kappa2, grid);
        if (se.max_gap > 1e-6) {
            rep.verdict = PairVerdict::HypothesisFailed;
            rep.stage = "scalar_equality";
            rep.detail = "scalar-curvature identity fails with gap " + std::to_string(se.max_gap);
            return rep;
        }
        throw ViolationError("numerical red flag: nonconstant characteristic with d >= 2 passing the "
                             "scalar identity; this configuration cannot occur",
                             se.max_gap);
    }
    rep.stage = "case_B2";
    const SurfacePair pair = make_surface_pair(spec.w1, spec.w2, spec.M.chart.lo[0], spec.M.chart.hi[0]);
    const NonIsometryReport wit = non_isometry_witness(pair);
    rep.witness = wit;
    if (wit.conclusive) {
        rep.verdict = PairVerdict::ExceptionalSurfacePair;
        rep.detail = "isocurved but not isometric: " + wit.reason;
    } else {
        rep.verdict = PairVerdict::HypothesisFailed;
        rep.stage = "witness_inconclusive";
        rep.detail = wit.reason;
    }
    return rep;
}

ClassifyReport classify_space_form_core(const EinsteinPairSpec& spec, const RicciRestrictionReport& rr,
                                        const std::vector<Point>& grid) {
    ClassifyReport rep;
    const int n = spec.M.chart.dim;
    // the shared form must be isotropic with constant factor: q = -tau g
    double lo = 0.0, hi = 0.0, iso_dev = 0.0;
    bool first = true;
    for (const Point& p : grid) {
        const Mat q = rr.q.q(p);
        const Mat g = spec.M.g(p);
        const Mat ginv = spec.M.g_inv_at(p);
        double c = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) c += ginv(i, j) * q(i, j);
        c /= n;
        iso_dev = std::max(iso_dev, (q - g.scaled(c)).max_abs() / std::max(1.0, std::abs(c)));
        if (first) {
            lo = hi = -c;
            first = false;
        }
        lo = std::min(lo, -c);
        hi = std::max(hi, -c);
    }
    rep.k = n;
    rep.tau_mean = 0.5 * (lo + hi);
    rep.tau_spread = hi - lo;
    rep.tau_constant = rep.tau_spread < 1e-6;
    if (iso_dev > 1e-6 || !rep.tau_constant) {
        rep.verdict = PairVerdict::HypothesisFailed;
        rep.stage = "unsupported_structure";
        rep.detail = "shared form is not a constant multiple of the metric; core is outside the "
                     "realized model families";
        return rep;
    }
    const double tau = rep.tau_mean;
    // the core must be a space form of curvature tau
    {
        const Point mid = grid[grid.size() / 2];
        const double scal = curvature(spec.M, mid).scalar;
        if (std::abs(scal - n * (n - 1) * tau) > 1e-3 * std::max(1.0, std::abs(scal))) {
            rep.verdict = PairVerdict::HypothesisFailed;
            rep.stage = "unsupported_structure";
            rep.detail = "core curvature does not match the characteristic constant";
            return rep;
        }
    }
    rep.stage = "case_A";
    // mu_i = tau v_i^2 + |grad v_i|^2 must be constant; the scalar identity
    // then pins (d-1)(kappa_i - mu_i) = 0.
    auto mu_const = [&](const ScalarField& v) {
        double mlo = 0.0, mhi = 0.0;
        bool f = true;
        for (const Point& p : grid) {
            const double mu = tau * v.eval(p) * v.eval(p) + grad_norm_sq(spec.M, v, p);
            if (f) {
                mlo = mhi = mu;
                f = false;
            }
            mlo = std::min(mlo, mu);
            mhi = std::max(mhi, mu);
        }
        return std::pair<double, double>{0.5 * (mlo + mhi), mhi - mlo};
    };
    const auto mu1 = mu_const(spec.w1);
    const auto mu2 = mu_const(spec.w2);
    if (mu1.second > 1e-6 || mu2.second > 1e-6) {
        rep.verdict = PairVerdict::HypothesisFailed;
        rep.stage = "mu_constancy";
        rep.detail = "mu of a pair function is not constant on the core";
        return rep;
    }
    if (spec.d > 1 &&
        (std::abs(spec.kappa1 - mu1.first) > 1e-6 || std::abs(spec.kappa2 - mu2.first) > 1e-6)) {
        rep.verdict = PairVerdict::HypothesisFailed;
        rep.stage = "scalar_equality";
        rep.detail = "(d-1)(kappa_i - mu_i) != 0: the scalar-curvature hypothesis fails";
        return rep;
    }
    // Einstein certification of both assembled fibers
    const Point mid = grid[grid.size() / 2];
    const double target = (n + spec.d - 1) * tau;
    double worst = 0.0;
    for (int side = 0; side < 2; ++side) {
        const ScalarField& v = side == 0 ? spec.w1 : spec.w2;
        const double kap = side == 0 ? spec.kappa1 : spec.kappa2;
        const FiberRicciValue fv = fiber_ricci(spec.M, tau, n, v, spec.d, kap, mid, true);
        const FiberRicciValue fh = fiber_ricci(spec.M, tau, n, v, spec.d, kap, mid, false);
        worst = std::max({worst, std::abs(fv.closed - target), std::abs(fh.closed - target)});
    }
    rep.curvature_gap = worst;
    if (worst < 1e-6) {
        rep.verdict = PairVerdict::Isometric;
        rep.detail = "both assembled fibers are Einstein with the same constant";
    } else {
        rep.verdict = PairVerdict::HypothesisFailed;
        rep.stage = "einstein_certification";
        rep.detail = "assembled fibers are not Einstein with the shared constant";
    }
    return rep;
}

} // namespace

ClassifyReport classify_pair(const EinsteinPairSpec& spec) {
    if (spec.d < 1) throw DomainError("fiber dimension d must be >= 1");
    const double margin = 20.0 * kDefaultStep;
    std::vector<int> counts(static_cast<size_t>(spec.M.chart.dim), spec.M.chart.dim == 1 ? 33 : 7);
    const auto grid = interior_grid(spec.M.chart, counts, margin);
    const RicciRestrictionReport rr = ricci_restriction_check(spec, grid);
    if (rr.dependent) {
        ClassifyReport rep;
        rep.verdict = PairVerdict::HypothesisFailed;
        rep.stage = "dependent";
        rep.detail = "the two functions are linearly dependent (evaluation rank " +
                     std::to_string(rr.rank) + "); the pair generates no splitting";
        return rep;
    }
    if (rr.max_dev > 1e-5) {
        ClassifyReport rep;
        rep.verdict = PairVerdict::HypothesisFailed;
        rep.stage = "ricci_restriction";
        rep.detail = "the two candidate forms disagree (relative gap " + std::to_string(rr.max_dev) + ")";
        return rep;
    }
    if (spec.M.chart.dim == 1) return classify_dim1(spec, rr, grid);
    return classify_space_form_core(spec, rr, grid);
}

} // namespace wr
