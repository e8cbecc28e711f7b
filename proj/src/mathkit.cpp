#include "hcsf/mathkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hcsf {

namespace {

double offdiag_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
}

// Normalize eigenvector signs: the entry of largest magnitude must be
// nonnegative, ties broken by lowest index.
void fix_column_sign(Matrix& r, std::size_t col) {
    std::size_t imax = 0;
    double vmax = -1.0;
    for (std::size_t i = 0; i < r.rows(); ++i) {
        const double v = std::fabs(r(i, col));
        if (v > vmax) {
            vmax = v;
            imax = i;
        }
    }
    if (r(imax, col) < 0.0)
        for (std::size_t i = 0; i < r.rows(); ++i) r(i, col) = -r(i, col);
}

}  // namespace

SymEig sym_eig(const Matrix& m) {
    const std::size_t n = m.rows();
    if (n == 0 || m.cols() != n) throw std::invalid_argument("sym_eig: matrix must be square, n >= 1");

    const double scale = std::max(1.0, max_abs(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(m(i, j) - m(j, i)) > 1e-12 * scale)
                throw std::invalid_argument("sym_eig: input not symmetric at entry (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");

    Matrix a = m;
    // Work on an exactly symmetric copy so row/column updates stay consistent.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(j, i) = a(i, j);
    Matrix r = Matrix::identity(n);

    const double thresh = 1e-13 * frobenius_norm(m);
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps && offdiag_norm(a) > thresh; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k != p && k != q) {
                        const double akp = a(k, p), akq = a(k, q);
                        a(k, p) = akp - s * (akq + tau * akp);
                        a(p, k) = a(k, p);
                        a(k, q) = akq + s * (akp - tau * akq);
                        a(q, k) = a(k, q);
                    }
                    const double rkp = r(k, p), rkq = r(k, q);
                    r(k, p) = rkp - s * (rkq + tau * rkp);
                    r(k, q) = rkq + s * (rkp - tau * rkq);
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymEig out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        out.eigenvalues[col] = a(order[col], order[col]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, col) = r(i, order[col]);
        fix_column_sign(out.eigenvectors, col);
    }
    return out;
}

Vec vec_stack(const Matrix& m) {
    Vec v(m.rows() * m.cols());
    std::size_t k = 0;
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) v[k++] = m(i, j);
    return v;
}

Matrix hermitian_reshape(const Vec& a) {
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(a.size()))));
    if (n * n != a.size())
        throw std::invalid_argument("hermitian_reshape: length " + std::to_string(a.size()) +
                                    " is not a perfect square");
    Matrix s(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            // column-major reshape entry (i, j) is a[j*n + i]
            if (i == j) {
                s(i, i) = a[j * n + i];
            } else {
                s(i, j) = 0.5 * (a[j * n + i] + a[i * n + j]);
            }
        }
    return s;
}

Matrix outer(const Vec& q) {
    Matrix m(q.size(), q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) m(i, j) = q[i] * q[j];
    return m;
}

}  // namespace hcsf
