#pragma once

#include <iosfwd>
#include <string>

#include "hcsf/allocator.hpp"
#include "hcsf/clf.hpp"
#include "hcsf/formation.hpp"
#include "hcsf/simulator.hpp"

namespace hcsf {

// A complete experiment definition. Serialized as JSON with one section per
// component; dense matrices are written as row-major nested lists, and the
// CLF matrix may instead name a preset ("default").
struct Scenario {
    FormationModel formation;
    AbsoluteState initial;
    DesiredConfiguration desired;
    QuadraticCLF clf;
    std::string clf_preset;  // non-empty when P came from a preset
    AllocatorConfig allocator;
    SimConfig simulation;
    std::string output_path;  // optional default CSV destination

    // Re-validates every component invariant, including the CLF decrease
    // condition. Throws std::invalid_argument naming the offending field.
    void validate() const;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& s);

// Per-sample CSV with header
//   t, xi_1.., nu_1.., q_1.., T_1.., V, branch
// written in full-precision scientific notation so repeated runs of the
// same scenario are byte-identical.
void write_csv(std::ostream& os, const FormationModel& model, const SimulationRecord& record);
void write_csv_file(const std::string& path, const FormationModel& model,
                    const SimulationRecord& record);

std::string format_full(double v);  // 17 significant digits, scientific

}  // namespace hcsf
