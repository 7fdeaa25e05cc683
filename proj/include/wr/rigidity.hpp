#pragma once

#include "wr/geom.hpp"
#include "wr/hill.hpp"
#include "wr/linalg.hpp"
#include "wr/solspace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wr {

// Element of the exterior square of a solution basis, stored as
// coefficients on index pairs i < j.
struct WedgeElement {
    struct Term {
        double coeff;
        int i, j; // i < j
    };
    std::vector<Term> terms;

    static WedgeElement basis(int i, int j); // e_i ^ e_j
    WedgeElement& add(double coeff, int i, int j);
    WedgeElement scaled(double s) const;
    WedgeElement plus(const WedgeElement& o) const;
    double max_coeff() const;
};

// The endomorphism L(x) = mu(w, x) v - mu(v, x) w attached to v ^ w,
// extended bilinearly; satisfies G L + L^T G = 0 for the Gram matrix G.
struct MuEndomorphism {
    Mat matrix;
    WedgeElement source;
};

// The Killing field v grad w - w grad v (gradients raised by the metric).
// Verifies the Killing property at `check_points` sample points unless the
// list is empty; throws ViolationError when the residual exceeds
// `killing_tol` (v and w then do not solve a common system).
VectorField iota(const SolutionSpace& s, const ScalarField& v, const ScalarField& w,
                 const std::vector<Point>& check_points = {}, double killing_tol = 1e-5);

VectorField iota_wedge(const SolutionSpace& s, const WedgeElement& z);

// Throws DegeneracyError when the Gram matrix has nullity > 1.
MuEndomorphism wedge_endomorphism(const Mat& gram, const WedgeElement& z);

// Bracket on the exterior square induced by the commutator of the attached
// endomorphisms: for decomposables,
//   [a^b, c^d] = -G(a,c) b^d + G(a,d) b^c + G(c,b) a^d - G(b,d) a^c.
WedgeElement bracket_wedge(const Mat& gram, const WedgeElement& z1, const WedgeElement& z2);

// max over points of | [iota z1, iota z2] - iota [z1, z2] |.
double homomorphism_check(const SolutionSpace& s, const Mat& gram, const WedgeElement& z1,
                          const WedgeElement& z2, const std::vector<Point>& points);

// Two warped extensions over the same core: E_i = M x_{w_i} N_i with
// space-form fibers of dimension d and curvature kappa_i.
struct EinsteinPairSpec {
    MetricChart M;
    ScalarField w1, w2;
    int d = 1;
    double kappa1 = 0.0, kappa2 = 0.0;
    std::string name;
};

EinsteinPairSpec swapped(const EinsteinPairSpec& spec);

struct RicciRestrictionReport {
    QuadraticFormField q; // the shared form (1/w_i) Hess w_i
    double max_dev = 0.0; // relative gap between the two candidates
    int rank = 0;         // evaluation rank of {w1, w2}
    bool dependent = false;
};

RicciRestrictionReport ricci_restriction_check(const EinsteinPairSpec& spec,
                                               const std::vector<Point>& grid, double h = kDefaultStep);

struct ScalarEqualityReport {
    bool vacuous = false; // d == 1: both sides are identically zero
    double max_gap = 0.0;
};

// (d-1)/v1^2 (kappa1 - |grad v1|^2) = (d-1)/v2^2 (kappa2 - |grad v2|^2)
// on the fiber grid.
ScalarEqualityReport scalar_equality_check(const MetricChart& fiber, const ScalarField& v1,
                                           const ScalarField& v2, int d, double kappa1, double kappa2,
                                           const std::vector<Point>& grid, double h = kDefaultStep);

struct FiberRicciValue {
    double closed = 0.0; // normalized Ricci factor from the closed form
    double fd = 0.0;     // same factor from FD curvature of the assembled metric
};

// Ricci curvature of the assembled fiber F_i = F x_{v_i} N_i in the
// horizontal (fiber-of-F) or vertical (N_i) direction, normalized by the
// metric, cross-checked against the FD curvature of g_F + v_i^2 h_i.
FiberRicciValue fiber_ricci(const MetricChart& fiber, double tau, int k, const ScalarField& v, int d,
                            double kappa_i, const Point& fiber_pt, bool vertical, double h = kDefaultStep);

enum class PairVerdict { Isometric, ExceptionalSurfacePair, HypothesisFailed };

struct ClassifyReport {
    PairVerdict verdict = PairVerdict::HypothesisFailed;
    std::string stage;  // "case_A", "case_B1", "case_B2", or the failing stage
    std::string detail;
    int k = 0;
    double tau_mean = 0.0;
    double tau_spread = 0.0;
    bool tau_constant = false;
    double curvature_gap = 0.0; // isometry certification: curvature agreement of the two total spaces
    std::optional<NonIsometryReport> witness;
};

// Uniqueness pipeline for the pair: shared quadratic form -> solution
// space -> warped splitting -> constancy of the characteristic function ->
// case analysis. Isometric verdicts are certified by matching
// constant-curvature (or Einstein) reports of both total spaces, not by
// constructing the isometry map.
ClassifyReport classify_pair(const EinsteinPairSpec& spec);

std::string to_string(PairVerdict v);

} // namespace wr
