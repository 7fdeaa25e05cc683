#include "wr/linalg.hpp"

#include "wr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace wr {

Mat::Mat(int rows, int cols, std::initializer_list<double> vals) : Mat(rows, cols) {
    size_t i = 0;
    for (double v : vals) {
        if (i >= a_.size()) break;
        a_[i++] = v;
    }
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::diag(const Vec& d) {
    Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

Mat Mat::transpose() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Mat Mat::operator+(const Mat& o) const {
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

Mat Mat::operator*(const Mat& o) const {
    Mat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    return r;
}

Mat Mat::scaled(double s) const {
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
}

Vec Mat::apply(const Vec& x) const {
    Vec y(static_cast<size_t>(rows_), 0.0);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) y[static_cast<size_t>(i)] += (*this)(i, j) * x[static_cast<size_t>(j)];
    return y;
}

double Mat::frobenius() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double Mat::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

double Mat::sym_deviation() const {
    double m = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
    return m;
}

void Mat::symmetrize() {
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j) {
            const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
            (*this)(i, j) = v;
            (*this)(j, i) = v;
        }
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec axpy(double a, const Vec& x, const Vec& y) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + y[i];
    return r;
}

namespace {

// Partial-pivot LU in place; perm holds the row permutation; returns the
// sign of the permutation or throws on exact singularity.
double lu_decompose(Mat& a, std::vector<int>& perm) {
    const int n = a.rows();
    perm.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    double sign = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > best) {
                best = std::abs(a(r, col));
                piv = r;
            }
        if (best == 0.0) throw DegeneracyError("singular matrix in LU decomposition");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            std::swap(perm[static_cast<size_t>(piv)], perm[static_cast<size_t>(col)]);
            sign = -sign;
        }
        for (int r = col + 1; r < n; ++r) {
            a(r, col) /= a(col, col);
            for (int j = col + 1; j < n; ++j) a(r, j) -= a(r, col) * a(col, j);
        }
    }
    return sign;
}

Vec lu_backsolve(const Mat& lu, const std::vector<int>& perm, const Vec& b) {
    const int n = lu.rows();
    Vec x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = b[static_cast<size_t>(perm[static_cast<size_t>(i)])];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= lu(i, j) * x[static_cast<size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= lu(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] /= lu(i, i);
    }
    return x;
}

double norm1(const Mat& a) {
    double best = 0.0;
    for (int j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (int i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

} // namespace

Vec lu_solve(Mat a, Vec b) {
    std::vector<int> perm;
    lu_decompose(a, perm);
    return lu_backsolve(a, perm, b);
}

double det(Mat a) {
    std::vector<int> perm;
    double sign;
    try {
        sign = lu_decompose(a, perm);
    } catch (const DegeneracyError&) {
        return 0.0;
    }
    double d = sign;
    for (int i = 0; i < a.rows(); ++i) d *= a(i, i);
    return d;
}

Mat inverse(const Mat& a, double cond_limit) {
    const int n = a.rows();
    Mat lu = a;
    std::vector<int> perm;
    lu_decompose(lu, perm);
    Mat inv(n, n);
    Vec e(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        e[static_cast<size_t>(j)] = 1.0;
        Vec col = lu_backsolve(lu, perm, e);
        for (int i = 0; i < n; ++i) inv(i, j) = col[static_cast<size_t>(i)];
        e[static_cast<size_t>(j)] = 0.0;
    }
    const double cond = norm1(a) * norm1(inv);
    if (!(cond < cond_limit))
        throw DegeneracyError("matrix too ill-conditioned (cond ~ " + std::to_string(cond) + ")");
    return inv;
}

Vec sym_eigenvalues(Mat a) {
    const int n = a.rows();
    const double scale = std::max(a.max_abs(), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= 1e-15 * scale) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) <= 1e-18 * scale) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    Vec ev(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

Vec singular_values(Mat a) {
    const int m = a.rows(), n = a.cols();
    // One-sided Jacobi: rotate column pairs until mutually orthogonal.
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < m; ++i) {
                    app += a(i, p) * a(i, p);
                    aqq += a(i, q) * a(i, q);
                    apq += a(i, p) * a(i, q);
                }
                if (std::abs(apq) <= 1e-30 + 1e-16 * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < m; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
            }
        if (!rotated) break;
    }
    Vec sv(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += a(i, j) * a(i, j);
        sv[static_cast<size_t>(j)] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

int rank(const Mat& a, double rel_tol) {
    const Vec sv = singular_values(a);
    if (sv.empty() || sv[0] == 0.0) return 0;
    int r = 0;
    for (double s : sv)
        if (s > rel_tol * sv[0]) ++r;
    return r;
}

} // namespace wr
