#pragma once

#include "wr/geom.hpp"
#include "wr/hill.hpp"
#include "wr/linalg.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace wr {

// The symmetric 2-tensor q of the system Hess w = w q.
struct QuadraticFormField {
    std::function<Mat(const Point&)> q;
};

QuadraticFormField qform_from_exprs(const std::vector<std::string>& entries,
                                    const std::vector<std::string>& coords);
QuadraticFormField qform_scaled_metric(const MetricChart& m, double factor); // factor * g

enum class BoundaryFlag { none, dirichlet, neumann };

// A finite basis spanning (a subspace of) the solution space of
// Hess w = w q on the given chart.
struct SolutionSpace {
    MetricChart manifold;
    QuadraticFormField q;
    std::vector<ScalarField> basis;
    std::vector<BoundaryFlag> boundary_flags;
};

// max over the grid of ||Hess w - w q||_F.
double residual(const SolutionSpace& s, const ScalarField& w, const std::vector<Point>& grid,
                double h = kDefaultStep);

// Rank of the (dim+1) x |basis| matrix with columns (w(p), grad w|_p).
// Singular values below 1e-8 of the largest count as zero.
int evaluation_rank(const SolutionSpace& s, const Point& p, double h = kDefaultStep);
Mat evaluation_matrix(const SolutionSpace& s, const std::vector<ScalarField>& fields, const Point& p,
                      double h = kDefaultStep);

struct ZeroSetReport {
    double max_hess_norm = 0.0;
    double min_grad_norm = 0.0;
    size_t points = 0;
};

// At points of the zero set of w: the gradient must not vanish and the
// covariant Hessian must vanish (the level set is totally geodesic).
// Throws PreconditionError when a level point has |w| >= level_tol and
// ViolationError when the gradient vanishes (the degenerate w == 0 case).
ZeroSetReport zero_set_check(const SolutionSpace& s, const ScalarField& w,
                             const std::vector<Point>& level_points, double level_tol = 1e-8,
                             double hess_tol = 1e-6, double h = kDefaultStep);

// Bisection of w along consecutive grid points where the sign changes.
std::vector<Point> find_zero_points(const ScalarField& w, const std::vector<Point>& grid,
                                    double tol = 1e-12);

enum class OneDDomain { line, circle, half_line, interval };

// 1-D problem w'' = -tau w on the chosen domain. `extent` is the circle
// radius, the interval length, or the working-window length for line and
// half-line numerics.
struct OneDProblem {
    OneDDomain domain = OneDDomain::line;
    double extent = 1.0;
    double tau = 0.0;
    std::function<double(double)> tau_fn;
    BoundaryFlag bc = BoundaryFlag::none;

    bool has_tau_fn() const { return static_cast<bool>(tau_fn); }
};

struct OneDClassification {
    int dim = 0, dim_D = 0, dim_N = 0;
    std::vector<ScalarField> basis;
    std::vector<BoundaryFlag> flags;
    Chart chart;
    bool has_boundary = false;
};

// Closed-form case analysis for constant tau; periodic problems with a
// characteristic function are decided by the monodromy matrix, with
// dimension = dim ker(monodromy - I).
OneDClassification classify_1d(const OneDProblem& p);

} // namespace wr
