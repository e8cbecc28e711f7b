#include "hcsf/simulator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hcsf/errors.hpp"

namespace hcsf {

double EtaSchedule::at(double t) const {
    double eta = entries.front().second;
    for (const auto& [time, value] : entries) {
        if (time <= t) eta = value;
        else break;
    }
    return eta;
}

void EtaSchedule::validate() const {
    if (entries.empty()) throw std::invalid_argument("eta schedule: must have at least one entry");
    if (entries.front().first > 0.0)
        throw std::invalid_argument("eta schedule: first entry must start at or before t = 0");
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& [time, value] : entries) {
        if (!(time > prev)) throw std::invalid_argument("eta schedule: times must be strictly increasing");
        if (!(value >= 0.0 && value <= 1.0))
            throw std::invalid_argument("eta schedule: eta must be in [0, 1]");
        prev = time;
    }
}

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("simulation: dt must be > 0");
    if (!(t_f >= 0.0)) throw std::invalid_argument("simulation: t_f must be >= 0");
    if (integrator_substeps < 1)
        throw std::invalid_argument("simulation: integrator_substeps must be >= 1");
    eta_schedule.validate();
}

namespace {

struct Derivative {
    Vec dx;  // velocities
    Vec dv;  // accelerations
};

Derivative eval(const FormationModel& model, const AbsoluteState& s, const Inputs& u) {
    return Derivative{s.velocities, full_dynamics(model, s, u)};
}

AbsoluteState shifted(const AbsoluteState& s, const Derivative& d, double h) {
    AbsoluteState out = s;
    for (std::size_t i = 0; i < out.positions.size(); ++i) {
        out.positions[i] += h * d.dx[i];
        out.velocities[i] += h * d.dv[i];
    }
    return out;
}

}  // namespace

AbsoluteState step(const FormationModel& model, const AbsoluteState& state, const Inputs& inputs,
                   double dt, std::size_t substeps, double t0) {
    if (!(dt > 0.0) || substeps < 1) throw std::invalid_argument("step: dt > 0 and substeps >= 1 required");
    const double h = dt / static_cast<double>(substeps);
    AbsoluteState s = state;
    for (std::size_t k = 0; k < substeps; ++k) {
        try {
            const Derivative k1 = eval(model, s, inputs);
            const Derivative k2 = eval(model, shifted(s, k1, 0.5 * h), inputs);
            const Derivative k3 = eval(model, shifted(s, k2, 0.5 * h), inputs);
            const Derivative k4 = eval(model, shifted(s, k3, h), inputs);
            for (std::size_t i = 0; i < s.positions.size(); ++i) {
                s.positions[i] += h / 6.0 * (k1.dx[i] + 2.0 * k2.dx[i] + 2.0 * k3.dx[i] + k4.dx[i]);
                s.velocities[i] += h / 6.0 * (k1.dv[i] + 2.0 * k2.dv[i] + 2.0 * k3.dv[i] + k4.dv[i]);
            }
        } catch (const SingularityError& e) {
            if (t0 >= 0.0)
                throw SingularityError(e.craft_a, e.craft_b, e.distance,
                                       t0 + static_cast<double>(k) * h);
            throw;
        }
    }
    return s;
}

SimulationRecord run(const FormationModel& model, const DesiredConfiguration& des,
                     const QuadraticCLF& clf, const AllocatorConfig& alloc_cfg,
                     const SimConfig& sim_cfg, const AbsoluteState& initial) {
    model.validate();
    des.validate(model);
    clf.validate(model);
    alloc_cfg.validate();
    sim_cfg.validate();

    const auto nsteps = static_cast<std::size_t>(std::floor(sim_cfg.t_f / sim_cfg.dt + 1e-9));

    SimulationRecord rec;
    rec.dt = sim_cfg.dt;
    rec.rows.reserve(nsteps + 1);

    AbsoluteState state = initial;
    double impulse_sum = 0.0;
    for (std::size_t k = 0; k <= nsteps; ++k) {
        const double t = static_cast<double>(k) * sim_cfg.dt;
        const ErrorState err = relative_from_absolute(model, state, des);

        AllocatorConfig cfg_k = alloc_cfg;
        cfg_k.eta = sim_cfg.eta_schedule.at(t);

        CLFDerivatives derivs;
        try {
            derivs = evaluate(clf, model, des, err);
        } catch (const SingularityError& e) {
            throw SingularityError(e.craft_a, e.craft_b, e.distance, t);
        }
        const AllocationResult alloc = allocate(derivs, clf.epsilon, cfg_k);

        rec.rows.push_back({t, err, alloc.q_star, alloc.T_star, derivs.V, alloc.branch});
        if (k < nsteps) {
            impulse_sum += norm2(alloc.T_star) * sim_cfg.dt;
            state = step(model, state, Inputs{alloc.q_star, alloc.T_star}, sim_cfg.dt,
                         sim_cfg.integrator_substeps, t);
        }
    }

    rec.impulse = impulse_sum;
    rec.final_xi_norm = norm2(rec.rows.back().state.xi);
    rec.final_state_norm = norm2(rec.rows.back().state.stacked());
    return rec;
}

double impulse(const SimulationRecord& record) {
    if (record.rows.empty()) throw std::invalid_argument("impulse: empty record");
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < record.rows.size(); ++k)
        sum += norm2(record.rows[k].thrust) * record.dt;
    return sum;
}

}  // namespace hcsf
