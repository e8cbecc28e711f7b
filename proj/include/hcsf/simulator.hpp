#pragma once

#include <utility>
#include <vector>

#include "hcsf/allocator.hpp"
#include "hcsf/clf.hpp"
#include "hcsf/formation.hpp"

namespace hcsf {

// Piecewise-constant eta schedule with left-closed intervals: the value at
// a switch time is the post-switch value.
struct EtaSchedule {
    // (switch time, eta) pairs, times strictly increasing, first one <= 0.
    std::vector<std::pair<double, double>> entries;

    static EtaSchedule constant(double eta) { return EtaSchedule{{{0.0, eta}}}; }
    double at(double t) const;
    void validate() const;
};

struct SimConfig {
    double dt = 0.1;    // sampling period, s
    double t_f = 700.0; // final time, s (t_f = 0 yields a single-sample record)
    EtaSchedule eta_schedule = EtaSchedule::constant(0.99);
    std::size_t integrator_substeps = 10;  // RK4 substeps per hold interval

    void validate() const;
};

struct SimulationRow {
    double t = 0.0;
    ErrorState state;
    Vec q;      // held charges, C
    Vec thrust; // held thrusts, N
    double V = 0.0;
    Branch branch = Branch::kNoInput;
};

struct SimulationRecord {
    std::vector<SimulationRow> rows;  // floor(t_f/dt) + 1 samples
    double dt = 0.0;
    double impulse = 0.0;          // integral of ||T||, N s (exact under zero-order hold)
    double final_xi_norm = 0.0;    // m
    double final_state_norm = 0.0; // norm of the stacked error state
};

// Advance the true dynamics by dt under constant inputs, using classical
// fixed-step RK4 with the given number of substeps. `t0` annotates
// singularity aborts with the offending time; pass a negative value outside
// a simulation.
AbsoluteState step(const FormationModel& model, const AbsoluteState& state, const Inputs& inputs,
                   double dt, std::size_t substeps, double t0 = -1.0);

// Closed-loop sample-and-hold run: at each sample instant allocate charges
// and thrusts from the current state with the scheduled eta, hold them over
// dt, and integrate the true dynamics. Aborts with SingularityError (time
// and pair attached) if two craft come closer than the minimum separation.
SimulationRecord run(const FormationModel& model, const DesiredConfiguration& des,
                     const QuadraticCLF& clf, const AllocatorConfig& alloc_cfg,
                     const SimConfig& sim_cfg, const AbsoluteState& initial);

// Thrust impulse of a record: sum of ||T_k|| dt over hold intervals (the
// trailing sample is never applied).
double impulse(const SimulationRecord& record);

}  // namespace hcsf
