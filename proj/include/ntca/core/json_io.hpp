// JSON serialization for states, circuits and amplitude vectors.
//
// States:   {"registers":[{"name","width"}], "amplitudes":[[re,im],...]}
// Circuits: {"qubits", "query_count_u", "query_count_udag", "gates":[...]}
// Vectors:  {"amplitudes":[[re,im],...]}  or CSV rows "re,im".

#pragma once

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ntca/core/circuit.hpp"
#include "ntca/core/state.hpp"

namespace ntca {

using json = nlohmann::ordered_json;

inline json complex_to_json(const cdouble& z) { return json::array({z.real(), z.imag()}); }

inline cdouble complex_from_json(const json& j) {
    require(j.is_array() && j.size() == 2, "complex entries must be [re,im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json cvector_to_json(const cvector& v) {
    json arr = json::array();
    for (const auto& z : v) arr.push_back(complex_to_json(z));
    return arr;
}

inline cvector cvector_from_json(const json& j) {
    require(j.is_array(), "expected an array of [re,im] pairs");
    cvector out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(complex_from_json(e));
    return out;
}

// -- states -------------------------------------------------------------------

inline json state_to_json(const QuantumState& s) {
    json j;
    j["registers"] = json::array();
    for (const auto& r : s.layout().registers()) {
        j["registers"].push_back({{"name", r.name}, {"width", r.width}});
    }
    j["amplitudes"] = cvector_to_json(s.amplitudes());
    return j;
}

inline QuantumState state_from_json(const json& j) {
    std::vector<Register> regs;
    for (const auto& r : j.at("registers")) {
        regs.push_back({r.at("name").get<std::string>(), r.at("width").get<int>()});
    }
    return QuantumState(RegisterLayout(std::move(regs)), cvector_from_json(j.at("amplitudes")));
}

// -- circuits -------------------------------------------------------------------

inline json gate_to_json(const Gate& g) {
    json j;
    j["kind"] = gate_kind_name(g.kind);
    if (!g.params.empty()) j["params"] = g.params;
    if (!g.targets.empty()) j["targets"] = g.targets;
    if (!g.controls.empty()) {
        json cs = json::array();
        for (const auto& c : g.controls) cs.push_back({{"qubit", c.qubit}, {"value", c.value ? 1 : 0}});
        j["controls"] = cs;
    }
    if (g.kind == GateKind::Dense) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < g.dense->rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < g.dense->cols(); ++c) row.push_back(complex_to_json((*g.dense)(r, c)));
            rows.push_back(row);
        }
        j["matrix"] = rows;
    }
    if (!g.label.empty()) j["label"] = g.label;
    if (g.oracle_u != 0) j["oracle_u"] = g.oracle_u;
    if (g.oracle_udag != 0) j["oracle_udag"] = g.oracle_udag;
    return j;
}

inline Gate gate_from_json(const json& j) {
    Gate g;
    auto kind = gate_kind_from_name(j.at("kind").get<std::string>());
    require(kind.has_value(), "unknown gate kind");
    g.kind = *kind;
    if (j.contains("params")) g.params = j["params"].get<std::vector<double>>();
    if (j.contains("targets")) g.targets = j["targets"].get<std::vector<int>>();
    if (j.contains("controls")) {
        for (const auto& c : j["controls"]) {
            g.controls.push_back({c.at("qubit").get<int>(), c.at("value").get<int>() != 0});
        }
    }
    if (g.kind == GateKind::Dense) {
        const auto& rows = j.at("matrix");
        const auto n = rows.size();
        Eigen::MatrixXcd m(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            require(rows[r].size() == n, "dense gate matrix must be square");
            for (std::size_t c = 0; c < n; ++c) m(r, c) = complex_from_json(rows[r][c]);
        }
        g.dense = std::make_shared<Eigen::MatrixXcd>(std::move(m));
    }
    if (j.contains("label")) g.label = j["label"].get<std::string>();
    if (j.contains("oracle_u")) g.oracle_u = j["oracle_u"].get<long>();
    if (j.contains("oracle_udag")) g.oracle_udag = j["oracle_udag"].get<long>();
    return g;
}

inline json circuit_to_json(const Circuit& c) {
    json j;
    j["qubits"] = c.num_qubits();
    j["query_count_u"] = c.query_count_u();
    j["query_count_udag"] = c.query_count_udag();
    j["gates"] = json::array();
    for (const auto& g : c.gates()) j["gates"].push_back(gate_to_json(g));
    return j;
}

inline Circuit circuit_from_json(const json& j) {
    Circuit c(j.at("qubits").get<int>());
    for (const auto& g : j.at("gates")) c.add(gate_from_json(g));
    return c;
}

// -- amplitude vectors ---------------------------------------------------------

inline cvector amplitude_vector_from_json(const json& j) {
    if (j.is_array()) return cvector_from_json(j);
    return cvector_from_json(j.at("amplitudes"));
}

// CSV rows "re,im"; blank lines and '#' comments skipped.
inline cvector amplitude_vector_from_csv(std::istream& in) {
    cvector out;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        double re = 0.0, im = 0.0;
        char comma = ',';
        row >> re;
        if (row >> comma) {
            require(comma == ',', "CSV rows must be re,im");
            row >> im;
        }
        require(!row.fail(), "malformed CSV amplitude row: " + line);
        out.emplace_back(re, im);
    }
    return out;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

inline void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    require(out.good(), "cannot write file: " + path);
    out << j.dump(2) << "\n";
}

inline cvector load_amplitude_vector(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        std::ifstream in(path);
        require(in.good(), "cannot open file: " + path);
        return amplitude_vector_from_csv(in);
    }
    return amplitude_vector_from_json(load_json_file(path));
}

} // namespace ntca
