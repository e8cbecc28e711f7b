#pragma once

#include "hcsf/linalg.hpp"

namespace hcsf {

// Result of a symmetric eigendecomposition M = R diag(eigenvalues) R^T.
//
//  - eigenvalues are sorted ascending,
//  - columns of R are the matching unit eigenvectors,
//  - each eigenvector is normalized so that its entry of largest magnitude
//    is nonnegative (ties broken by lowest index), which makes the
//    decomposition deterministic: eigenvectors of a parameter-dependent
//    symmetric matrix do not vary continuously in general, so a fixed
//    convention is the reproducible substitute.
struct SymEig {
    Vec eigenvalues;
    Matrix eigenvectors;
};

// Cyclic Jacobi eigendecomposition for small dense symmetric matrices.
// Sweeps until the off-diagonal Frobenius norm drops below
// 1e-13 * ||M||_F. Rejects input that is not symmetric to within
// 1e-12 (relative to the largest entry magnitude).
SymEig sym_eig(const Matrix& m);

// Column-major vectorization: vec(M) stacks consecutive columns, so the
// entry of vec(q q^T) at index b*n + a (0-based) is q[a]*q[b].
Vec vec_stack(const Matrix& m);

// Inverse of Lemma-style quadratic-form folding: for a row vector a of
// length n^2, returns the symmetric n x n matrix S with
// a . vec(x x^T) = x^T S x, i.e. the Hermitian part of the column-major
// reshape of a. Rejects lengths that are not perfect squares.
Matrix hermitian_reshape(const Vec& a);

// Outer product q q^T.
Matrix outer(const Vec& q);

}  // namespace hcsf
