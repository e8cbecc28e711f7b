#include "hcsf/allocator.hpp"

#include <cmath>
#include <stdexcept>

#include "hcsf/errors.hpp"
#include "hcsf/mathkit.hpp"

namespace hcsf {

void AllocatorConfig::validate() const {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("allocator: eta must be in [0, 1]");
    if (!(q_max > 0.0)) throw std::invalid_argument("allocator: q_max must be > 0");
    if (!(clf_violation_tol > 0.0))
        throw std::invalid_argument("allocator: clf_violation_tol must be > 0");
    if (!(shortfall_tol >= 0.0)) throw std::invalid_argument("allocator: shortfall_tol must be >= 0");
}

const char* to_string(Branch b) {
    switch (b) {
        case Branch::kNoInput: return "no-input";
        case Branch::kChargeAndThrust: return "charge-and-thrust";
        case Branch::kThrustOnly: return "thrust-only";
    }
    return "?";
}

namespace {

bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

AllocationResult allocate(const CLFDerivatives& derivs, double epsilon,
                          const AllocatorConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(derivs.V) || !std::isfinite(derivs.LfV) || !all_finite(derivs.LgcV) ||
        !all_finite(derivs.LgTV))
        throw std::invalid_argument("allocate: non-finite CLF derivatives");
    if (!(epsilon > 0.0)) throw std::invalid_argument("allocate: epsilon must be > 0");

    const auto craft_count =
        static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(derivs.LgcV.size()))));

    AllocationResult res;
    res.q_star.assign(craft_count, 0.0);
    res.T_star.assign(derivs.LgTV.size(), 0.0);

    const double need = derivs.LfV + epsilon * derivs.V;
    if (need <= 0.0) {
        res.branch = Branch::kNoInput;
        res.predicted_Vdot = derivs.LfV;
        return res;
    }

    const SymEig eig = sym_eig(derivs.charge_quadratic_form());
    res.lambda_min = eig.eigenvalues.front();

    double q1 = 0.0;
    double charge_term = 0.0;  // LgcV . vec(q* q*^T), via the eigenvalue identity
    if (res.lambda_min < 0.0) {
        const double uncapped = std::sqrt(cfg.eta * need / -res.lambda_min);
        if (uncapped > cfg.q_max) {
            q1 = cfg.q_max;
            res.cap_active = true;
            charge_term = res.lambda_min * cfg.q_max * cfg.q_max;
        } else {
            q1 = uncapped;
            charge_term = -cfg.eta * need;
        }
    }
    for (std::size_t i = 0; i < craft_count; ++i) res.q_star[i] = q1 * eig.eigenvectors(i, 0);
    if (res.q_star[0] < 0.0)
        for (double& qi : res.q_star) qi = -qi;

    const double c = need + charge_term;
    double thrust_term = 0.0;
    if (c > 0.0) {
        const double a2 = dot(derivs.LgTV, derivs.LgTV);
        const double tol = cfg.clf_violation_tol * (1.0 + std::fabs(derivs.V));
        if (a2 >= tol) {
            res.T_star = scaled(derivs.LgTV, -c / a2);
            thrust_term = dot(derivs.LgTV, res.T_star);
        } else if (c > cfg.shortfall_tol * epsilon * derivs.V + tol) {
            throw ClfViolationError(
                "decrease shortfall " + std::to_string(c) +
                " with a degenerate thrust direction; P or the state is corrupted");
        }
        // else: the unmet shortfall is at the feasibility-margin level of the
        // CLF weights; there is no meaningful direction to command.
    }

    res.predicted_Vdot = derivs.LfV + charge_term + thrust_term;
    res.branch = q1 > 0.0 ? Branch::kChargeAndThrust : Branch::kThrustOnly;
    if (!all_finite(res.q_star) || !all_finite(res.T_star) || !std::isfinite(res.predicted_Vdot))
        throw std::invalid_argument("allocate: non-finite result");
    return res;
}

AllocationResult allocate(const QuadraticCLF& clf, const FormationModel& model,
                          const DesiredConfiguration& des, const ErrorState& state,
                          const AllocatorConfig& cfg) {
    if (!all_finite(state.xi) || !all_finite(state.nu))
        throw std::invalid_argument("allocate: non-finite error state");
    return allocate(evaluate(clf, model, des, state), clf.epsilon, cfg);
}

double charge_decrease_check(const QuadraticCLF& clf, const CLFDerivatives& derivs,
                             const AllocationResult& result, const AllocatorConfig& cfg) {
    const double need = derivs.LfV + clf.epsilon * derivs.V;
    return dot(derivs.LgcV, vec_stack(outer(result.q_star))) + cfg.eta * need;
}

KktReport kkt_consistency(const QuadraticCLF& clf, const CLFDerivatives& derivs,
                          const AllocationResult& result, const AllocatorConfig& cfg) {
    KktReport rep;
    if (result.branch != Branch::kChargeAndThrust) {
        rep.reason = "allocation is not charge-and-thrust";
        return rep;
    }
    if (!(result.lambda_min < 0.0)) {
        rep.reason = "smallest charge-form eigenvalue is not negative";
        return rep;
    }
    if (result.cap_active) {
        rep.reason = "charge cap is active";
        return rep;
    }
    if (!(cfg.eta > 0.0 && cfg.eta < 1.0)) {
        rep.reason = "eta is not interior to (0, 1)";
        return rep;
    }
    rep.applicable = true;

    const double need = derivs.LfV + clf.epsilon * derivs.V;
    const double a2 = dot(derivs.LgTV, derivs.LgTV);
    rep.gamma2 = -a2 / (2.0 * (1.0 - cfg.eta) * result.lambda_min * need);
    rep.mu = -1.0 / result.lambda_min;

    const Vec t_rec = scaled(derivs.LgTV, -rep.mu / (2.0 * rep.gamma2));
    const double t_norm = norm2(result.T_star);
    rep.thrust_rel_err = norm2(vec_sub(t_rec, result.T_star)) / std::max(t_norm, 1e-300);
    rep.thrust_ok = rep.thrust_rel_err <= 1e-8;

    const double q1 = norm2(result.q_star);
    const double lhs =
        result.lambda_min * q1 * q1 + a2 / (2.0 * rep.gamma2 * result.lambda_min) + need;
    rep.constraint_rel_err = std::fabs(lhs) / std::fabs(need);
    rep.constraint_ok = rep.constraint_rel_err <= 1e-8;

    // Stationarity in the eigenbasis: (I + mu Lambda) q~* = 0.
    const SymEig eig = sym_eig(derivs.charge_quadratic_form());
    const Vec q_tilde = matvec_t(eig.eigenvectors, result.q_star);
    double err2 = 0.0;
    for (std::size_t i = 0; i < q_tilde.size(); ++i) {
        const double vi = (1.0 + rep.mu * eig.eigenvalues[i]) * q_tilde[i];
        err2 += vi * vi;
    }
    rep.stationarity_err = std::sqrt(err2) / std::max(norm2(q_tilde), 1e-300);
    rep.stationarity_ok = rep.stationarity_err <= 1e-10;
    return rep;
}

}  // namespace hcsf
