#pragma once

#include "wr/geom.hpp"
#include "wr/linalg.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wr {

enum class SpaceFormKind { sphere, euclidean, hyperbolic };

// A model space form together with its characteristic constant tau:
// +1 for the unit sphere, 0 for Euclidean space, negative for hyperbolic
// space. When dim == 1 tau may instead be a function of the coordinate;
// that is the only case where a non-constant characteristic is possible.
struct SpaceFormSpec {
    SpaceFormKind kind = SpaceFormKind::euclidean;
    int dim = 1;
    double tau = 0.0;
    std::function<double(double)> tau_fn; // dim == 1 only

    bool has_tau_fn() const { return static_cast<bool>(tau_fn); }
};

// A realized model: one chart covering all sample points, plus the
// closed-form (dim+1)-element solution basis of Hess v = -tau v g.
struct SpaceFormModel {
    SpaceFormSpec spec;
    MetricChart metric;
    std::vector<ScalarField> basis;

    int dim() const { return spec.dim; }
    double tau() const; // throws PreconditionError when tau is a function
};

// Supported: kind in {sphere, euclidean, hyperbolic}, dim <= 3.
// sphere requires tau == 1 (unit sphere); hyperbolic requires tau < 0.
// A function-valued tau (dim == 1) produces a numeric two-solution basis
// backed by the ODE engine.
SpaceFormModel make_space_form(const SpaceFormSpec& spec);

// tau v^2 + |grad v|^2 evaluated at the given points; asserts the spread
// is below `tol` and returns the mean. Throws ViolationError otherwise.
double mu_of_solution(const SpaceFormModel& model, const ScalarField& v, const std::vector<Point>& points,
                      double tol = 1e-7);

struct GramMu {
    Mat gram;
    int rank = 0;
    double spread = 0.0; // worst per-entry spread across the check points
};

// Gram matrix G_ij = tau v_i v_j + g(grad v_i, grad v_j) of the basis,
// with constancy asserted across 10 interior points.
GramMu gram_mu(const SpaceFormModel& model, double tol = 1e-7);

// Metric chart of a d-dimensional space form of the given sectional
// curvature on a standard chart (building block for assembled fibers).
MetricChart space_form_metric(double curvature, int d, const std::string& name = "space_form");

} // namespace wr
