#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace wr {

using Vec = std::vector<double>;

// Dense row-major matrix. Everything in this library is desk-scale:
// chart dimensions <= 4 and solution bases <= 6, so no attempt is made
// to be clever about storage or blocking.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols), 0.0) {}
    Mat(int rows, int cols, std::initializer_list<double> vals);

    static Mat identity(int n);
    static Mat diag(const Vec& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i * cols_ + j)]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i * cols_ + j)]; }

    Mat transpose() const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator*(const Mat& o) const;
    Mat scaled(double s) const;
    Vec apply(const Vec& x) const;

    double frobenius() const;
    double max_abs() const;
    double sym_deviation() const; // max |a_ij - a_ji|
    void symmetrize();

    const Vec& data() const { return a_; }

private:
    int rows_ = 0, cols_ = 0;
    Vec a_;
};

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
Vec axpy(double a, const Vec& x, const Vec& y); // a*x + y

// Solve A x = b by partial-pivot LU. Throws DegeneracyError when singular.
Vec lu_solve(Mat a, Vec b);

// Determinant by LU.
double det(Mat a);

// Inverse with a 1-norm condition estimate; throws DegeneracyError when
// cond exceeds cond_limit (degenerate warped metrics as u -> 0).
Mat inverse(const Mat& a, double cond_limit = 1e10);

// Eigenvalues of a symmetric matrix by cyclic Jacobi, ascending.
Vec sym_eigenvalues(Mat a);

// Singular values by one-sided Jacobi orthogonalization, descending.
Vec singular_values(Mat a);

// Number of singular values above rel_tol * sigma_max.
int rank(const Mat& a, double rel_tol = 1e-8);

} // namespace wr
