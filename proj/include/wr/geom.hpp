#pragma once

#include "wr/expr.hpp"
#include "wr/linalg.hpp"

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace wr {

using Point = std::vector<double>;

// Finite-difference step on O(1)-scaled charts; callers may override per call.
inline constexpr double kDefaultStep = 1e-4;

// A single axis-aligned coordinate box, optionally periodic per axis.
// Atlases and chart transitions are out of scope: every model here lives on
// one chart that covers all sample points used.
struct Chart {
    int dim = 1;
    Vec lo, hi;
    std::vector<bool> periodic;
    Vec period;

    static Chart box(const Vec& lo, const Vec& hi);
    Chart& set_periodic(int axis, double period_length);

    bool is_periodic(int axis) const { return periodic[static_cast<size_t>(axis)]; }
    bool contains(const Point& p) const;
    // Throws MarginError when p is within `margin` of a non-periodic end.
    void require_margin(const Point& p, double margin) const;
};

// A smooth function on a chart. `grad` and `hess` are optional closed-form
// coordinate partials; when absent, central differences are the fallback.
struct ScalarField {
    std::function<double(const Point&)> eval;
    std::function<Vec(const Point&)> grad;   // coordinate partials
    std::function<Mat(const Point&)> hess;   // coordinate second partials

    bool has_grad() const { return static_cast<bool>(grad); }
    bool has_hess() const { return static_cast<bool>(hess); }

    Vec grad_or_fd(const Point& p, double h = kDefaultStep) const;
    Mat hess_or_fd(const Point& p, double h = kDefaultStep) const;
};

ScalarField constant_field(int dim, double c);
// Field from a symbolic expression in the named coordinates; first and
// second derivatives are attached symbolically.
ScalarField field_from_expr(const std::string& text, const std::vector<std::string>& coords);
ScalarField field_from_expr(const Expr& e, const std::vector<std::string>& coords);
ScalarField scale_field(const ScalarField& f, double c);
ScalarField add_fields(const ScalarField& f, const ScalarField& g);

struct VectorField {
    std::function<Vec(const Point&)> eval;
};

struct MetricChart {
    Chart chart;
    std::function<Mat(const Point&)> g;
    // Optional closed-form coordinate derivatives d_l g (one matrix per
    // axis); preferred by the connection when present, FD otherwise.
    std::function<std::vector<Mat>(const Point&)> dg;
    std::string name;

    Mat g_at(const Point& p) const { return g(p); }
    Mat g_inv_at(const Point& p, double cond_limit = 1e10) const;
    std::vector<Mat> dg_or_fd(const Point& p, double h = kDefaultStep) const;
};

MetricChart euclidean_metric(int dim, const Vec& lo, const Vec& hi, const std::string& name = "euclidean");
// Metric from symbolic entries (row-major, dim x dim) in the named coordinates.
MetricChart metric_from_exprs(Chart chart, const std::vector<std::string>& entries,
                              const std::vector<std::string>& coords, const std::string& name);

struct CurvatureReport {
    int dim = 0;
    std::vector<double> christoffel; // [k][i][j]
    std::vector<double> riemann;     // R^i_{jkl}
    Mat ricci;
    double scalar = 0.0;
    Point point;

    double christoffel_at(int k, int i, int j) const;
    double riemann_at(int i, int j, int k, int l) const;
    // All-lower R_{ijkl} = g_{im} R^m_{jkl}.
    double riemann_lower(const Mat& g, int i, int j, int k, int l) const;
};

// Levi-Civita connection coefficients
//   Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
// with second-order central differences of the metric.
std::vector<double> christoffel(const MetricChart& m, const Point& p, double h = kDefaultStep);

// Covariant Hessian (Hess w)_ij = d_i d_j w - Gamma^k_ij d_k w.
Mat hess_scalar(const MetricChart& m, const ScalarField& w, const Point& p, double h = kDefaultStep);

double laplacian(const MetricChart& m, const ScalarField& w, const Point& p, double h = kDefaultStep);

// |grad w|^2 = g^{ij} d_i w d_j w.
double grad_norm_sq(const MetricChart& m, const ScalarField& w, const Point& p, double h = kDefaultStep);

// g(grad v, grad w).
double grad_inner(const MetricChart& m, const ScalarField& v, const ScalarField& w, const Point& p,
                  double h = kDefaultStep);

CurvatureReport curvature(const MetricChart& m, const Point& p, double h = kDefaultStep);

// (L_K g)_ij = K^k d_k g_ij + g_kj d_i K^k + g_ik d_j K^k.
Mat lie_derivative_metric(const MetricChart& m, const VectorField& K, const Point& p, double h = kDefaultStep);

// [X,Y]^i = X^k d_k Y^i - Y^k d_k X^i.
Vec vector_bracket(const VectorField& X, const VectorField& Y, const Point& p, double h = kDefaultStep);

// Tensor grid over the chart interior, `counts` nodes per axis, shrunk by
// `margin` on non-periodic ends.
std::vector<Point> interior_grid(const Chart& chart, const std::vector<int>& counts, double margin);

std::vector<Point> sample_interior(const Chart& chart, int n, double margin, std::mt19937& rng);

} // namespace wr
