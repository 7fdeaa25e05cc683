#pragma once

#include "wr/geom.hpp"
#include "wr/solspace.hpp"
#include "wr/spaceform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wr {

// A declared u = 0 face of the base, lying at `coord` on `axis`, possibly
// beyond the truncated chart box (grids exclude the degenerate collar).
struct BoundaryFace {
    int axis = 0;
    double coord = 0.0;
};

// Base of a warped product: (B, g_B, u) with u > 0 on the interior and
// q_B = (1/u) Hess_B u.
struct BaseSpace {
    MetricChart metric;
    ScalarField u;
    QuadraticFormField q_B;
    std::vector<BoundaryFace> boundary;
};

// Validates u > 0 on a sample grid, attaches q_B, and for each declared
// boundary face checks |grad u| = 1 there by one-sided extrapolation from
// the collar (fields are assumed to extend smoothly to the face).
BaseSpace make_base_space(MetricChart B, ScalarField u, std::vector<BoundaryFace> boundary = {});

// M = B x_u F with metric g_B + u^2 g_F on the product chart.
struct WarpedProductSpec {
    BaseSpace base;
    SpaceFormModel fiber;
    MetricChart total;
    ScalarField kappa; // kappa = (tau - |grad u|^2)/u^2, so that q|_F = -kappa u^2 g_F

    int base_dim() const { return base.metric.chart.dim; }
    int fiber_dim() const { return fiber.dim(); }

    Point base_point(const Point& p) const;
    Point fiber_point(const Point& p) const;
    Point join(const Point& x, const Point& y) const;

    ScalarField lift_base(const ScalarField& f) const;  // pullback along pi_1
    ScalarField lift_fiber(const ScalarField& f) const; // pullback along pi_2
    ScalarField warping() const { return lift_base(base.u); }

    double tau_at(const Point& fiber_pt) const;

    std::vector<Point> product_grid(int base_count, int fiber_count, double margin,
                                    double u_min = 0.1) const;
};

WarpedProductSpec build_warped(BaseSpace base, SpaceFormModel fiber);

// Block form of q: (1/u) Hess_B u horizontally, (|grad u|^2 - tau) g_F
// vertically.
QuadraticFormField assemble_q(const WarpedProductSpec& wp);

// w(x,y) = u(x) v(y); verifies the membership residual at a few interior
// sample points and throws ConstructionError when it exceeds `check_tol`.
ScalarField lift_solution(const WarpedProductSpec& wp, const ScalarField& v, double check_tol = 1e-6);

struct Decomposition {
    ScalarField z, v;
    std::string gauge_note;
    double consistency = 0.0;   // max |w - z - u v| over the check grid
    double mixed_hessian = 0.0; // hypothesis residual
};

// Splits w = z o pi_1 + (u o pi_1)(v o pi_2), gauge-fixed by z(b0) = 0 at
// the first grid point; representatives are unique only up to
// (z, v) -> (z + c u, v - c).
Decomposition decompose(const WarpedProductSpec& wp, const ScalarField& w, int base_count = 17,
                        int fiber_count = 17, double tol = 1e-8);

struct ExtensionReport {
    double z_residual = 0.0;            // membership of z in the base system
    double fiber_residual_direct = 0.0; // displayed fiber equation, block form
    double fiber_residual_mu = 0.0;     // same equation via the mu forms
    double forms_agreement = 0.0;       // pointwise gap between the two forms
};

// The two conditions under which z and v assemble to a solution on M:
// z solves the base system, and v solves the displayed fiber equation,
// evaluated both in block form and through the mu forms (they must agree).
ExtensionReport check_extension_conditions(const WarpedProductSpec& wp, const ScalarField& z,
                                           const ScalarField& v, int base_count = 9, int fiber_count = 9);

struct CurvatureCheckReport {
    double vertical_ricci_dev = 0.0;
    double horizontal_ricci_dev = 0.0;
    double radial_hessian_dev = 0.0;
    double scalar_dev = 0.0;
    double rho_closed = 0.0;
    double scalar_closed = 0.0;
    double max_dev() const;
};

// Cross-checks the closed warped-product curvature identities against the
// finite-difference curvature of the assembled product metric.
CurvatureCheckReport oneill_curvature_check(const WarpedProductSpec& wp, const Point& p,
                                            double h = kDefaultStep);

struct TraceRelationReport {
    int k = 0;
    double dev = 0.0;
};

// k = 1: tr(Q_B) = lap_B u / u = -rho;  k > 1: tr Q = -(k rho + tr Q_B)/(k-1).
TraceRelationReport trace_relation_check(const WarpedProductSpec& wp, const Point& p,
                                         double h = kDefaultStep);

struct MuForms {
    double mu1_mean = 0.0, mu1_spread = 0.0;
    double mu12_mean = 0.0, mu12_spread = 0.0;
};

// mu(w) = kappa w^2 + |grad w|^2 and mu(w1,w2) = kappa w1 w2 +
// g(grad w1, grad w2) over the grid, with constancy spreads.
MuForms mu_forms(const WarpedProductSpec& wp, const ScalarField& w1, const ScalarField& w2,
                 const std::vector<Point>& grid);

struct MuGradientReport {
    double lift_identity_dev = 0.0; // grad mu(w) = (w/u)^2 grad mu(u) for a lift w
    double uz_identity_dev = 0.0;   // grad mu(u,z) = (z/u) grad mu(u) + (kappa - kappa_B)(u grad z - z grad u)
};

MuGradientReport mu_gradient_identities(const WarpedProductSpec& wp, const ScalarField& z,
                                        int base_count = 17, int fiber_count = 9);

// kappa_B of the base system (one-dimensional bases only).
double kappa_base(const WarpedProductSpec& wp, const Point& base_pt);

struct LineFamily {
    WarpedProductSpec wp;
    QuadraticFormField q;
    int dim_lower_bound = 0;               // fiber dim + 1
    bool constant_curvature_condition = false; // tau/u^2 = -(u'/u)' identically
    double condition_residual = 0.0;
};

// The one-dimensional-base family: B = (window, dt^2), q_B = (u''/u) dt^2
// has a two-dimensional base solution space; the total space carries the
// block form q with lower bound fiber-dim + 1 on its solution space, and
// dimension fiber-dim + 2 exactly when the displayed condition holds (the
// total metric then has constant curvature).
LineFamily line_base_family(const ScalarField& u, const SpaceFormModel& fiber, double t_lo, double t_hi);

} // namespace wr
