#include "hcsf/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hcsf/errors.hpp"

namespace hcsf {

using json = nlohmann::ordered_json;

namespace {

const json& require(const json& j, const std::string& key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw std::invalid_argument(where + ": missing field '" + key + "'");
    return *it;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw std::invalid_argument(where + ": expected a number");
    return j.get<double>();
}

Vec number_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw std::invalid_argument(where + ": expected a list of numbers");
    Vec v;
    v.reserve(j.size());
    for (const auto& x : j) v.push_back(number(x, where));
    return v;
}

// One d-vector per craft, flattened.
Vec per_craft(const json& j, std::size_t count, std::size_t dim, const std::string& where) {
    if (!j.is_array() || j.size() != count)
        throw std::invalid_argument(where + ": expected " + std::to_string(count) + " entries");
    Vec out;
    out.reserve(count * dim);
    for (std::size_t i = 0; i < count; ++i) {
        const Vec row = number_list(j[i], where + "[" + std::to_string(i) + "]");
        if (row.size() != dim)
            throw std::invalid_argument(where + "[" + std::to_string(i) + "]: expected " +
                                        std::to_string(dim) + " components");
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

Matrix dense_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument(where + ": expected nested lists");
    const std::size_t rows = j.size();
    const Vec first = number_list(j[0], where + "[0]");
    Matrix m(rows, first.size());
    for (std::size_t i = 0; i < rows; ++i) {
        const Vec row = number_list(j[i], where + "[" + std::to_string(i) + "]");
        if (row.size() != m.cols())
            throw std::invalid_argument(where + ": ragged rows");
        for (std::size_t c = 0; c < row.size(); ++c) m(i, c) = row[c];
    }
    return m;
}

json matrix_rows(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json per_craft_rows(const Vec& flat, std::size_t count, std::size_t dim) {
    json rows = json::array();
    for (std::size_t i = 0; i < count; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < dim; ++k) row.push_back(flat[i * dim + k]);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

void Scenario::validate() const {
    formation.validate();
    const std::size_t nd = formation.count * formation.dim;
    if (initial.positions.size() != nd || initial.velocities.size() != nd)
        throw std::invalid_argument("initial: expected " + std::to_string(nd) +
                                    " position and velocity components");
    try {
        full_dynamics(formation, initial, Inputs::zero(formation));
    } catch (const SingularityError& e) {
        throw std::invalid_argument(std::string{"initial: "} + e.what());
    }
    desired.validate(formation);
    clf.validate(formation);
    allocator.validate();
    simulation.validate();
}

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string{"scenario: invalid JSON: "} + e.what());
    }

    Scenario s;
    const json& jf = require(j, "formation", "scenario");
    s.formation.count = static_cast<std::size_t>(number(require(jf, "count", "formation"), "formation.count"));
    s.formation.dim = static_cast<std::size_t>(number(require(jf, "dim", "formation"), "formation.dim"));
    s.formation.masses = number_list(require(jf, "masses", "formation"), "formation.masses");
    if (jf.contains("kappa_c")) s.formation.kappa_c = number(jf["kappa_c"], "formation.kappa_c");
    if (jf.contains("min_separation"))
        s.formation.min_separation = number(jf["min_separation"], "formation.min_separation");
    s.formation.validate();

    const json& ji = require(j, "initial", "scenario");
    s.initial.positions = per_craft(require(ji, "positions", "initial"), s.formation.count,
                                    s.formation.dim, "initial.positions");
    s.initial.velocities = per_craft(require(ji, "velocities", "initial"), s.formation.count,
                                     s.formation.dim, "initial.velocities");

    const json& jd = require(j, "desired", "scenario");
    s.desired.xi_des = number_list(require(jd, "xi_des", "desired"), "desired.xi_des");

    const json& jc = require(j, "clf", "scenario");
    const json& jp = require(jc, "P", "clf");
    if (jp.is_string()) {
        s.clf_preset = jp.get<std::string>();
        if (s.clf_preset != kDefaultClfPresetName)
            throw std::invalid_argument("clf.P: unknown preset '" + s.clf_preset + "'");
        s.clf.P = default_clf_matrix(s.formation);
    } else {
        s.clf.P = dense_matrix(jp, "clf.P");
    }
    s.clf.epsilon = number(require(jc, "epsilon", "clf"), "clf.epsilon");

    const json& ja = require(j, "allocator", "scenario");
    if (ja.contains("eta_schedule")) {
        const json& js = ja["eta_schedule"];
        if (!js.is_array() || js.empty())
            throw std::invalid_argument("allocator.eta_schedule: expected a list of [time, eta] pairs");
        s.simulation.eta_schedule.entries.clear();
        for (const auto& entry : js) {
            const Vec pair = number_list(entry, "allocator.eta_schedule entry");
            if (pair.size() != 2)
                throw std::invalid_argument("allocator.eta_schedule: entries must be [time, eta]");
            s.simulation.eta_schedule.entries.emplace_back(pair[0], pair[1]);
        }
        s.allocator.eta = s.simulation.eta_schedule.entries.front().second;
    } else {
        s.allocator.eta = number(require(ja, "eta", "allocator"), "allocator.eta");
        s.simulation.eta_schedule = EtaSchedule::constant(s.allocator.eta);
    }
    s.allocator.q_max = number(require(ja, "q_max", "allocator"), "allocator.q_max");
    if (ja.contains("clf_violation_tol"))
        s.allocator.clf_violation_tol = number(ja["clf_violation_tol"], "allocator.clf_violation_tol");

    const json& jsim = require(j, "simulation", "scenario");
    s.simulation.dt = number(require(jsim, "dt", "simulation"), "simulation.dt");
    s.simulation.t_f = number(require(jsim, "t_f", "simulation"), "simulation.t_f");
    if (jsim.contains("substeps"))
        s.simulation.integrator_substeps =
            static_cast<std::size_t>(number(jsim["substeps"], "simulation.substeps"));

    if (j.contains("output")) s.output_path = j["output"].get<std::string>();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("scenario: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
    json j;
    j["formation"] = {{"count", s.formation.count},
                      {"dim", s.formation.dim},
                      {"masses", s.formation.masses}};
    if (s.formation.kappa_c != kCoulombConstant) j["formation"]["kappa_c"] = s.formation.kappa_c;
    if (s.formation.min_separation != kDefaultMinSeparation)
        j["formation"]["min_separation"] = s.formation.min_separation;
    j["initial"] = {
        {"positions", per_craft_rows(s.initial.positions, s.formation.count, s.formation.dim)},
        {"velocities", per_craft_rows(s.initial.velocities, s.formation.count, s.formation.dim)}};
    j["desired"] = {{"xi_des", s.desired.xi_des}};
    if (!s.clf_preset.empty())
        j["clf"] = {{"P", s.clf_preset}, {"epsilon", s.clf.epsilon}};
    else
        j["clf"] = {{"P", matrix_rows(s.clf.P)}, {"epsilon", s.clf.epsilon}};
    const auto& sched = s.simulation.eta_schedule.entries;
    if (sched.size() == 1) {
        j["allocator"] = {{"eta", s.allocator.eta}, {"q_max", s.allocator.q_max}};
    } else {
        json pairs = json::array();
        for (const auto& [time, eta] : sched) pairs.push_back(json::array({time, eta}));
        j["allocator"] = {{"eta_schedule", pairs}, {"q_max", s.allocator.q_max}};
    }
    if (s.allocator.clf_violation_tol != AllocatorConfig{}.clf_violation_tol)
        j["allocator"]["clf_violation_tol"] = s.allocator.clf_violation_tol;
    j["simulation"] = {{"dt", s.simulation.dt},
                       {"t_f", s.simulation.t_f},
                       {"substeps", s.simulation.integrator_substeps}};
    if (!s.output_path.empty()) j["output"] = s.output_path;
    return j.dump(2) + "\n";
}

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

void write_csv(std::ostream& os, const FormationModel& model, const SimulationRecord& record) {
    const std::size_t n = model.rel_dim();
    os << "t";
    for (std::size_t i = 1; i <= n; ++i) os << ",xi_" << i;
    for (std::size_t i = 1; i <= n; ++i) os << ",nu_" << i;
    for (std::size_t i = 1; i <= model.count; ++i) os << ",q_" << i;
    for (std::size_t i = 1; i <= model.count * model.dim; ++i) os << ",T_" << i;
    os << ",V,branch\n";
    for (const auto& row : record.rows) {
        os << format_full(row.t);
        for (double v : row.state.xi) os << ',' << format_full(v);
        for (double v : row.state.nu) os << ',' << format_full(v);
        for (double v : row.q) os << ',' << format_full(v);
        for (double v : row.thrust) os << ',' << format_full(v);
        os << ',' << format_full(row.V) << ',' << to_string(row.branch) << '\n';
    }
}

void write_csv_file(const std::string& path, const FormationModel& model,
                    const SimulationRecord& record) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("csv: cannot open '" + path + "' for writing");
    write_csv(out, model, record);
}

}  // namespace hcsf
