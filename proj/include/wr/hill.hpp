#pragma once

#include "wr/geom.hpp"
#include "wr/linalg.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wr {

// Second-order linear problem w'' = theta(t) w on a time window. For the
// characteristic-function convention used elsewhere, theta = -tau.
struct OdeProblem {
    std::function<double(double)> theta;
    double t_lo = 0.0, t_hi = 1.0;
    std::optional<double> period;
};

// Dense solution from an adaptive embedded Runge-Kutta (Dormand-Prince 4/5)
// integration. Between accepted nodes, w is interpolated by quintic Hermite
// using the exact node relation w'' = theta w; w' by cubic Hermite.
struct OdeSolution {
    std::vector<double> t, w, dw, theta_w, d3w; // w'' = theta w and w''' at nodes
    std::function<double(double)> theta;
    double t_lo = 0.0, t_hi = 0.0;

    double value(double at) const;
    double deriv(double at) const;
    double second(double at) const { return theta(at) * value(at); }
    // 1-D field on [t_lo, t_hi] backed by the dense output; the second
    // derivative comes from the defining relation, so it is exact relative
    // to the interpolated value.
    ScalarField as_field() const;
};

// Integrates from initial data (w0, dw0) posed at t_init (defaults to
// t_lo), both directions when t_init is interior. Local tolerance applies
// per step; steps are capped so dense output stays near node accuracy.
OdeSolution solve_ivp(const OdeProblem& p, double w0, double dw0, double atol = 1e-10, double rtol = 1e-10,
                      std::optional<double> t_init = std::nullopt, double max_step = 0.05);

// v2' v1 - v2 v1' at t; constant in t for solutions of the same problem.
double wronskian(const OdeSolution& s1, const OdeSolution& s2, double at);
double wronskian_spread(const OdeSolution& s1, const OdeSolution& s2, int samples = 64);

// Fundamental matrix over one period T from initial data (1,0), (0,1);
// det = 1 to integrator accuracy. Throws PreconditionError when theta is
// not T-periodic on sampling.
Mat monodromy(const OdeProblem& p);

enum class Coexistence { all_periodic, one_periodic_ray, none };

struct CoexistenceReport {
    Coexistence verdict;
    int periodic_dim = 0; // dim ker(M -+ I)
    bool antiperiodic = false;
    Mat mono;
};

CoexistenceReport coexistence(const OdeProblem& p);

struct MonotoneRatioWitness {
    std::vector<double> t, ratio;
    double min_slope = 0.0; // min |(v2/v1)'| = |W|/max v1^2
    double wronskian = 0.0;
    bool monotone = false;
};

// Certifies that a positive solution excludes coexistence: the ratio
// v2/v1 has derivative W/v1^2 of one sign, hence is strictly monotone.
MonotoneRatioWitness positive_excludes_allperiodic(const OdeSolution& s1, const OdeSolution& s2,
                                                   int samples = 256);

// Two metrics dt^2 + v_i(t)^2 dx^2 sharing the Gauss curvature
// tau(t) = -v1''/v1, with constant nonzero Wronskian when independent.
struct SurfacePair {
    ScalarField v1, v2;     // positive 1-D fields with derivatives
    std::function<double(double)> tau;
    double t_lo = 0.0, t_hi = 0.0;
    double wronskian_value = 0.0;
    double wronskian_spread = 0.0;
    double curvature_match = 0.0; // max |(-v1''/v1) - (-v2''/v2)| on the check grid

    MetricChart metric1() const;
    MetricChart metric2() const;
};

// Builds v2 = v1 * (int_0^t v1^-2 + C2) by adaptive quadrature and checks
// the pair invariants. The positivity condition is checked at the window
// edge; `tail_bound` is a user-declared bound on the mass of v1^-2 beyond
// the window (without it the check is window-only and flagged in the note).
struct IsocurvedBuild {
    SurfacePair pair;
    double window_edge_value = 0.0; // u at t_lo, the binding positivity value
    bool tail_checked = false;
    std::string note;
};

IsocurvedBuild build_isocurved_pair(const ScalarField& v1, double c2, double t_lo, double t_hi,
                                    std::optional<double> tail_bound = std::nullopt);

struct NonIsometryReport {
    bool conclusive = false;
    std::string verdict; // "not isometric" or "inconclusive"
    double window_lo = 0.0, window_hi = 0.0;
    double min_log_slope_gap = 0.0; // min |v1'/v1 - v2'/v2| over the window
    double max_log_slope_gap = 0.0;
    double wronskian = 0.0;
    std::string reason;
};

// The obstruction argument: on a window where tau is strictly monotone, a
// fiber-preserving isometry would force equal logarithmic derivatives; a
// gap bounded away from zero together with a nonzero Wronskian certifies
// the two surfaces are not isometric.
NonIsometryReport non_isometry_witness(const SurfacePair& pair, int samples = 512);

// Adaptive Simpson quadrature (used for the pair construction and tests).
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

} // namespace wr
