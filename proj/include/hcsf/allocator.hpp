#pragma once

#include <string>

#include "hcsf/clf.hpp"
#include "hcsf/formation.hpp"

namespace hcsf {

struct AllocatorConfig {
    // Share of the required Lyapunov decrease assigned to Coulomb actuation;
    // thrusters supply the remainder. 0 = thrusters only, 1 = charges only.
    double eta = 0.99;
    // Charge magnitude cap, C. Keeps the commanded charge bounded as the
    // error (and with it the attainable Coulomb decrease per unit charge)
    // shrinks.
    double q_max = 1e-2;
    // Degenerate-case detection threshold (absolute, scaled by 1 + |V|).
    double clf_violation_tol = 1e-12;
    // Largest tolerated decrease shortfall, as a fraction of epsilon V, when
    // the thrust direction is degenerate. On the null space of B^T P every
    // input channel vanishes, and CLF weights that pass verification only up
    // to its margin tolerance leave a shortfall of this order there; a
    // corrupted P leaves a shortfall orders of magnitude larger.
    double shortfall_tol = 1e-2;

    void validate() const;
};

enum class Branch { kNoInput, kChargeAndThrust, kThrustOnly };
const char* to_string(Branch b);

struct AllocationResult {
    Vec q_star;        // charges, C; first entry >= 0 by convention
    Vec T_star;        // stacked thrusts, N
    Branch branch = Branch::kNoInput;
    double lambda_min = 0.0;  // smallest eigenvalue of the folded charge form
                              // (0.0 when the no-input branch skips it)
    bool cap_active = false;
    double predicted_Vdot = 0.0;  // dV/dt under (q_star, T_star); <= -epsilon V
};

// Charge/thrust allocation:
//
//   1. If LfV + epsilon V <= 0, no input is needed.
//   2. Otherwise diagonalize the folded charge form; if its smallest
//      eigenvalue is negative, command the capped charge
//      min(q_max, sqrt(-eta (LfV + epsilon V) / lambda_min)) along the
//      matching eigenvector (sign-normalized so the first charge is >= 0).
//   3. Top up with the minimum-norm thrust meeting the remaining decrease:
//      with c the still-uncovered part of epsilon V + dV/dt and
//      a = LgTV^T, T = 0 if c <= 0, else T = -(c/||a||^2) a.
//
// The remaining decrease c is formed from the eigenvalue identity (charge
// contribution lambda_min q1^2), so when the cap is inactive it equals
// (1 - eta)(LfV + epsilon V) exactly and eta = 1 yields an exactly zero
// thrust.
//
// Throws ClfViolationError when thrust is required but the thrust
// direction is degenerate (impossible for a verified CLF), and
// std::invalid_argument on non-finite inputs.
AllocationResult allocate(const CLFDerivatives& derivs, double epsilon,
                          const AllocatorConfig& cfg);
AllocationResult allocate(const QuadraticCLF& clf, const FormationModel& model,
                          const DesiredConfiguration& des, const ErrorState& state,
                          const AllocatorConfig& cfg);

// Residual of the charge-share inequality
//   LgcV . vec(q* q*^T) + eta (LfV + epsilon V),
// evaluated through the full matrix product. Zero (to rounding) when the
// cap is inactive; may be positive when the cap binds, in which case the
// thrust covers the shortfall.
double charge_decrease_check(const QuadraticCLF& clf, const CLFDerivatives& derivs,
                             const AllocationResult& result, const AllocatorConfig& cfg);

// Consistency of an allocation with the KKT conditions of the one-constraint
// QCQP  min q^T q + gamma2 T^T T  s.t.  dV/dt <= -epsilon V,  for the
// state-dependent weight
//   gamma2 = -LgTV LgTV^T / (2 (1 - eta) lambda_min (LfV + epsilon V)).
// Applicable only to uncapped charge-and-thrust allocations with
// 0 < eta < 1.
struct KktReport {
    bool applicable = false;
    std::string reason;      // why the report is not applicable
    double gamma2 = 0.0;
    double mu = 0.0;         // Lagrange multiplier, -1/lambda_min
    double thrust_rel_err = 0.0;       // reconstructed thrust vs allocator thrust
    double constraint_rel_err = 0.0;   // active-constraint identity residual
    double stationarity_err = 0.0;     // ||(I + mu Lambda) q~*|| / ||q~*||
    bool thrust_ok = false;
    bool constraint_ok = false;
    bool stationarity_ok = false;

    bool pass() const { return applicable && thrust_ok && constraint_ok && stationarity_ok; }
};

KktReport kkt_consistency(const QuadraticCLF& clf, const CLFDerivatives& derivs,
                          const AllocationResult& result, const AllocatorConfig& cfg);

}  // namespace hcsf
