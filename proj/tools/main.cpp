#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcsf/errors.hpp"
#include "hcsf/scenario.hpp"
#include "hcsf/simulator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitAborted = 2;

struct Overrides {
    std::optional<double> eta;
    std::optional<double> dt;
    std::optional<double> tf;
    std::optional<double> qmax;
    std::optional<std::size_t> substeps;
    std::string out;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--eta", ov.eta, "Constant eta override (replaces any schedule)");
    cmd->add_option("--dt", ov.dt, "Sampling period override, s");
    cmd->add_option("--tf", ov.tf, "Final time override, s");
    cmd->add_option("--qmax", ov.qmax, "Charge cap override, C");
    cmd->add_option("--substeps", ov.substeps, "Integrator substeps per hold interval");
    cmd->add_option("--out", ov.out, "Output CSV path");
}

void apply(const Overrides& ov, hcsf::Scenario& s) {
    if (ov.eta) {
        s.allocator.eta = *ov.eta;
        s.simulation.eta_schedule = hcsf::EtaSchedule::constant(*ov.eta);
    }
    if (ov.dt) s.simulation.dt = *ov.dt;
    if (ov.tf) s.simulation.t_f = *ov.tf;
    if (ov.qmax) s.allocator.q_max = *ov.qmax;
    if (ov.substeps) s.simulation.integrator_substeps = *ov.substeps;
    if (!ov.out.empty()) s.output_path = ov.out;
}

std::string default_output(const std::string& scenario_path) {
    return std::filesystem::path(scenario_path).stem().string() + ".csv";
}

int cmd_run(const std::string& path, const Overrides& ov) {
    hcsf::Scenario s;
    try {
        s = hcsf::load_scenario(path);
        apply(ov, s);
        s.validate();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }

    hcsf::SimulationRecord rec;
    try {
        rec = hcsf::run(s.formation, s.desired, s.clf, s.allocator, s.simulation, s.initial);
    } catch (const hcsf::SingularityError& e) {
        std::cerr << "aborted: " << e.what() << "\n";
        return kExitAborted;
    } catch (const hcsf::ClfViolationError& e) {
        std::cerr << "aborted: " << e.what() << "\n";
        return kExitAborted;
    }

    const std::string out = s.output_path.empty() ? default_output(path) : s.output_path;
    hcsf::write_csv_file(out, s.formation, rec);
    std::cout << "samples=" << rec.rows.size() << " csv=" << out << "\n"
              << "impulse_Ns=" << hcsf::format_full(rec.impulse)
              << " final_xi_norm_m=" << hcsf::format_full(rec.final_xi_norm)
              << " final_state_norm=" << hcsf::format_full(rec.final_state_norm) << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& path, const std::vector<double>& etas, const Overrides& ov) {
    hcsf::Scenario base;
    try {
        base = hcsf::load_scenario(path);
        apply(ov, base);
        base.validate();
        for (double eta : etas)
            if (!(eta >= 0.0 && eta <= 1.0))
                throw std::invalid_argument("sweep: eta values must be in [0, 1]");
        if (etas.empty()) throw std::invalid_argument("sweep: need at least one eta");
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }

    struct RowResult {
        bool ok = false;
        std::string error;
        double impulse = 0.0;
        double final_xi = 0.0;
    };

    // Runs are independent; order of the output table follows the input list.
    std::vector<std::future<RowResult>> futures;
    futures.reserve(etas.size());
    for (double eta : etas) {
        futures.push_back(std::async(std::launch::async, [&base, eta]() {
            RowResult r;
            hcsf::Scenario s = base;
            s.allocator.eta = eta;
            s.simulation.eta_schedule = hcsf::EtaSchedule::constant(eta);
            try {
                const auto rec =
                    hcsf::run(s.formation, s.desired, s.clf, s.allocator, s.simulation, s.initial);
                r.ok = true;
                r.impulse = rec.impulse;
                r.final_xi = rec.final_xi_norm;
            } catch (const std::exception& e) {
                r.error = e.what();
            }
            return r;
        }));
    }

    std::ostringstream table;
    table << "eta,impulse_Ns,final_xi_norm_m,status\n";
    bool any_failed = false;
    for (std::size_t i = 0; i < etas.size(); ++i) {
        const RowResult r = futures[i].get();
        table << hcsf::format_full(etas[i]) << ',';
        if (r.ok) {
            table << hcsf::format_full(r.impulse) << ',' << hcsf::format_full(r.final_xi) << ",ok\n";
        } else {
            any_failed = true;
            table << ",,error: " << r.error << "\n";
        }
    }

    if (!ov.out.empty()) {
        std::ofstream f(ov.out);
        if (!f) {
            std::cerr << "error: cannot open '" << ov.out << "' for writing\n";
            return kExitInvalid;
        }
        f << table.str();
    } else {
        std::cout << table.str();
    }
    return any_failed ? kExitAborted : kExitOk;
}

int cmd_validate(const std::string& path) {
    hcsf::Scenario s;
    try {
        s = hcsf::load_scenario(path);
    } catch (const std::invalid_argument& e) {
        std::cout << "FAIL " << e.what() << "\n";
        return kExitInvalid;
    }

    bool ok = true;
    auto check = [&ok](const std::string& name, auto&& fn) {
        try {
            fn();
            std::cout << "ok   " << name << "\n";
        } catch (const std::exception& e) {
            ok = false;
            std::cout << "FAIL " << name << ": " << e.what() << "\n";
        }
    };

    check("formation", [&] { s.formation.validate(); });
    check("initial state", [&] {
        try {
            hcsf::full_dynamics(s.formation, s.initial, hcsf::Inputs::zero(s.formation));
        } catch (const hcsf::SingularityError& e) {
            throw std::invalid_argument(e.what());
        }
    });
    check("desired configuration", [&] { s.desired.validate(s.formation); });
    check("allocator", [&] { s.allocator.validate(); });
    check("simulation", [&] { s.simulation.validate(); });
    check("clf", [&] {
        const auto v = hcsf::verify_clf(s.clf, s.formation);
        std::cout << "     clf margin = " << hcsf::format_full(v.margin)
                  << " (min eigenvalue of P = " << hcsf::format_full(v.p_min_eig) << ")\n";
        if (!(v.p_min_eig > 0.0)) throw std::invalid_argument("P is not positive definite");
        if (!v.pass) {
            std::ostringstream msg;
            msg << "decrease condition violated, margin = " << hcsf::format_full(v.margin)
                << ", witness state = [";
            for (std::size_t i = 0; i < v.witness.size(); ++i)
                msg << (i ? ", " : "") << hcsf::format_full(v.witness[i]);
            msg << "]";
            throw std::invalid_argument(msg.str());
        }
    });

    std::cout << (ok ? "valid\n" : "invalid\n");
    return ok ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coulomb-plus-thruster formation allocation and simulation"};
    app.require_subcommand(1);

    std::string scenario_path;
    Overrides ov;
    std::vector<double> etas;

    CLI::App* run = app.add_subcommand("run", "Simulate one scenario and write the per-sample CSV");
    run->add_option("scenario", scenario_path, "Scenario file")->required();
    add_override_flags(run, ov);

    CLI::App* sweep = app.add_subcommand("sweep", "Run the scenario across a list of eta values");
    sweep->add_option("scenario", scenario_path, "Scenario file")->required();
    sweep->add_option("--etas", etas, "Eta values")->required()->delimiter(',');
    add_override_flags(sweep, ov);

    CLI::App* validate = app.add_subcommand("validate", "Check a scenario without running it");
    validate->add_option("scenario", scenario_path, "Scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario_path, ov);
        if (sweep->parsed()) return cmd_sweep(scenario_path, etas, ov);
        return cmd_validate(scenario_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}
