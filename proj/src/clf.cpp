#include "hcsf/clf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hcsf/mathkit.hpp"

namespace hcsf {

void QuadraticCLF::validate(const FormationModel& model) const {
    const std::size_t dim = model.state_dim();
    if (P.rows() != dim || P.cols() != dim)
        throw std::invalid_argument("clf: P must be " + std::to_string(dim) + " x " +
                                    std::to_string(dim));
    const double scale = std::max(1.0, max_abs(P));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j)
            if (std::fabs(P(i, j) - P(j, i)) > 1e-12 * scale)
                throw std::invalid_argument("clf: P is not symmetric");
    if (!(epsilon > 0.0)) throw std::invalid_argument("clf: epsilon must be > 0");

    const ClfVerification v = verify_clf(*this, model);
    if (!(v.p_min_eig > 0.0)) throw std::invalid_argument("clf: P is not positive definite");
    if (!v.pass)
        throw std::invalid_argument("clf: (P, epsilon) fails the decrease condition, margin = " +
                                    std::to_string(v.margin));
}

Matrix default_clf_matrix(const FormationModel& model) {
    const std::size_t n = model.rel_dim();
    const double a = 0.995057;
    const double b = 0.00497061;
    Matrix p(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        p(i, i) = a;
        p(n + i, n + i) = a;
        p(i, n + i) = b;
        p(n + i, i) = b;
    }
    return p;
}

Matrix CLFDerivatives::charge_quadratic_form() const { return hermitian_reshape(LgcV); }

CLFDerivatives evaluate(const QuadraticCLF& clf, const FormationModel& model,
                        const DesiredConfiguration& des, const ErrorState& state) {
    const std::size_t n = model.rel_dim();
    if (state.xi.size() != n || state.nu.size() != n)
        throw std::invalid_argument("evaluate: error state dimension mismatch");
    const Vec big = state.stacked();
    if (clf.P.rows() != big.size()) throw std::invalid_argument("evaluate: P dimension mismatch");

    const Vec w = scaled(matvec(clf.P, big), 2.0);  // gradient of V
    CLFDerivatives d;
    d.V = 0.5 * dot(w, big);
    // f(Xi) = (nu, 0), so LfV only sees the top half of the gradient.
    d.LfV = 0.0;
    for (std::size_t i = 0; i < n; ++i) d.LfV += w[i] * state.nu[i];

    // g_C = B g~_C and g_T = B g~_T: only the bottom half of the gradient
    // reaches the input matrices.
    Vec w_bottom(w.begin() + static_cast<std::ptrdiff_t>(n), w.end());
    const Vec xi_tilde = vec_add(state.xi, des.xi_des);
    d.LgcV = matvec_t(gc_matrix(model, xi_tilde), w_bottom);
    d.LgTV = matvec_t(gt_matrix(model), w_bottom);
    return d;
}

ClfVerification verify_clf(const QuadraticCLF& clf, const FormationModel& model,
                           double margin_tol) {
    const std::size_t n = model.rel_dim();
    const std::size_t dim = 2 * n;
    if (clf.P.rows() != dim || clf.P.cols() != dim)
        throw std::invalid_argument("verify_clf: P must be " + std::to_string(dim) + " square");

    ClfVerification out;
    const SymEig pe = sym_eig(clf.P);
    out.p_min_eig = pe.eigenvalues.front();

    // Null space of B^T P (the rows n..2n-1 of P) via the eigenvectors of
    // M^T M with zero eigenvalue.
    Matrix m(n, dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim; ++j) m(i, j) = clf.P(n + i, j);
    const Matrix k = transpose(m) * m;
    const SymEig ke = sym_eig(k);
    const double kmax = std::max(std::fabs(ke.eigenvalues.front()), std::fabs(ke.eigenvalues.back()));
    Matrix z(dim, 0);
    {
        std::size_t null_dim = 0;
        while (null_dim < dim && ke.eigenvalues[null_dim] <= 1e-12 * std::max(1.0, kmax)) ++null_dim;
        z = Matrix(dim, null_dim);
        for (std::size_t j = 0; j < null_dim; ++j)
            for (std::size_t i = 0; i < dim; ++i) z(i, j) = ke.eigenvectors(i, j);
    }
    if (z.cols() == 0) {
        // B^T P has no null space only if P is singular in a degenerate way;
        // the infimum condition is then vacuous.
        out.pass = true;
        out.margin = -1.0;
        return out;
    }

    const ErrorDynamicsMatrices ab = error_dynamics_matrices(model);
    const Matrix pa = clf.P * ab.A;
    Matrix g = 0.5 * (pa + transpose(pa)) + (0.5 * clf.epsilon) * clf.P;
    Matrix s = transpose(z) * (g * z);
    s = 0.5 * (s + transpose(s));

    const SymEig se = sym_eig(s);
    out.margin = se.eigenvalues.back();
    out.pass = out.margin <= margin_tol;
    Vec top(se.eigenvectors.rows());
    for (std::size_t i = 0; i < top.size(); ++i)
        top[i] = se.eigenvectors(i, se.eigenvectors.cols() - 1);
    out.witness = matvec(z, top);
    return out;
}

}  // namespace hcsf
