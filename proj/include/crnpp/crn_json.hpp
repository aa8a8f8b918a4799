#pragma once

#include <string>

#include <json.hpp>

#include "crnpp/compile.hpp"
#include "crnpp/crn.hpp"

namespace crnpp {

// ordered_json + pre-sorted key insertion keeps serialized CRNs diffable.
using Json = nlohmann::ordered_json;

inline Json to_json(const Multiset& m) {
    Json j = Json::object();
    for (const auto& [s, mult] : m) j[s.str()] = mult;
    return j;
}

inline Json to_json(const Reaction& r) {
    Json j;
    j["reactants"] = to_json(r.reactants);
    j["products"] = to_json(r.products);
    j["rate"] = r.rate;
    Json prov;
    prov["step"] = r.origin.step;
    prov["phase"] = r.origin.phase;
    prov["command"] = r.origin.command;
    j["provenance"] = prov;
    return j;
}

inline Json to_json(const Crn& crn) {
    Json j;
    Json species = Json::object();
    for (const auto& s : crn.all_species()) species[s.str()] = crn.initial_of(s);
    j["species"] = species;
    Json reactions = Json::array();
    for (const auto& r : crn.reactions) reactions.push_back(to_json(r));
    j["reactions"] = reactions;
    return j;
}

inline Json to_json(const CompiledProgram& cp) {
    Json j = to_json(cp.crn);

    Json schedule;
    schedule["total_phases"] = cp.schedule.total_phases;
    Json steps = Json::array();
    for (std::size_t si = 0; si < cp.schedule.step_to_phases.size(); ++si) {
        Json s;
        s["step"] = si;
        s["phases"] = cp.schedule.step_to_phases[si];
        steps.push_back(s);
    }
    schedule["steps"] = steps;

    Json phases = Json::array();
    auto by_phase = cp.reactions_by_phase();
    for (int p = 0; p < cp.schedule.total_phases; ++p) {
        Json entry;
        entry["phase"] = p;
        entry["catalyst"] = cp.schedule.catalyst_of(p).str();
        Json commands = Json::array();
        std::string last;
        for (std::size_t ri : by_phase[p]) {
            const std::string& cmd = cp.crn.reactions[ri].origin.command;
            if (cmd != last) commands.push_back(cmd);
            last = cmd;
        }
        entry["commands"] = commands;
        phases.push_back(entry);
    }
    schedule["phases"] = phases;

    j["schedule"] = schedule;
    Json params = Json::object();
    for (const auto& [k, v] : cp.bindings) params[k] = v;
    j["params"] = params;
    j["epsilon"] = cp.config.epsilon;
    return j;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace crnpp
