#pragma once

#include "hcsf/formation.hpp"
#include "hcsf/linalg.hpp"

namespace hcsf {

// Quadratic control Lyapunov function V(Xi) = Xi^T P Xi with decay rate
// epsilon: every state must admit an input making dV/dt <= -epsilon V.
// P is loaded from configuration and checked by verify_clf; synthesizing
// P is out of scope here.
struct QuadraticCLF {
    Matrix P;         // symmetric positive definite, 2d(N-1) square
    double epsilon;   // 1/s, > 0

    void validate(const FormationModel& model) const;
};

// The stock CLF weights used by the bundled scenarios: block structure
// [[a I, b I], [b I, a I]] with a = 0.995057, b = 0.00497061, sized for
// the given formation.
Matrix default_clf_matrix(const FormationModel& model);
inline constexpr const char* kDefaultClfPresetName = "default";

// V and its Lie derivatives at one state. The derivative of V along the
// closed loop decomposes as
//   dV/dt = LfV + LgcV . vec(q q^T) + LgTV . T.
struct CLFDerivatives {
    double V = 0.0;
    double LfV = 0.0;
    Vec LgcV;   // row vector, length N^2
    Vec LgTV;   // row vector, length dN

    // Folded quadratic form of the charge term: the symmetric N x N matrix
    // with LgcV . vec(q q^T) = q^T M q. Its diagonal is exactly zero and
    // hence its trace is exactly zero.
    Matrix charge_quadratic_form() const;
};

// Evaluate V, LfV = Xi^T (A^T P + P A) Xi, LgcV = 2 Xi^T P g_C(xi) and
// LgTV = 2 Xi^T P g_T at the given error state. Propagates a
// SingularityError when the implied geometry has a pair closer than the
// minimum separation.
CLFDerivatives evaluate(const QuadraticCLF& clf, const FormationModel& model,
                        const DesiredConfiguration& des, const ErrorState& state);

// Result of checking the CLF condition for (P, epsilon).
//
// The infimum condition is equivalent to a finite-dimensional one: on the
// null space of B^T P (dimension d(N-1) since B has full column rank and P
// is nonsingular), the form He(PA) + (epsilon/2) P must be negative
// semidefinite. `margin` is the largest eigenvalue of that restricted form
// and `witness` is a state achieving it; the check passes iff
// margin <= margin_tol.
struct ClfVerification {
    bool pass = false;
    double margin = 0.0;
    Vec witness;          // state direction attaining the margin
    double p_min_eig = 0.0;  // smallest eigenvalue of P
};

// Tolerance on the restricted-form margin. Numerically synthesized P
// matrices (SDP solvers, truncated printed digits) carry feasibility error
// around 1e-6..1e-5, which is harmless in closed loop; a genuinely wrong P
// fails by orders of magnitude more. 1e-10 would reject such matrices.
inline constexpr double kDefaultClfMarginTol = 1e-4;

ClfVerification verify_clf(const QuadraticCLF& clf, const FormationModel& model,
                           double margin_tol = kDefaultClfMarginTol);

}  // namespace hcsf
