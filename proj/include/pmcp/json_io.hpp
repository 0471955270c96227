#pragma once

#include <json.hpp>

#include <string>

#include "pmcp/automata.hpp"
#include "pmcp/edgetypes.hpp"
#include "pmcp/template.hpp"
#include "pmcp/unwinding.hpp"

namespace pmcp {

using nlohmann::json;

// Template wire format:
//   {"kind":"rb","k":2,"atoms":[...],"states":[...],"initial":[...],
//    "labels":{"s":["p"],...},
//    "edges":[{"src":"s","dst":"t","label":{"action":"a","index":1}}
//            |{"src":"s","dst":"t","label":"broadcast"}
//            |{"src":"s","dst":"t","label":{"action":"b","role":"snd"}}]}
// The action table is implied by edge order (first appearance).
json template_to_json(const ProcessTemplate& tpl);

// Throws std::runtime_error on malformed input. Shape errors only; semantic
// violations are validate_template's job.
ProcessTemplate template_from_json(const json& j);

// Components, prefix/period, cross edges, and the flattened template under
// "template" (round-trips through template_from_json).
json unwinding_to_json(const UnwoundTemplate& uw);

// One object per flat edge (endpoints, component, flags, shade, witness
// coefficients as exact strings) plus summary counts.
json edge_type_report_to_json(const UnwoundTemplate& uw, const EdgeTypeReport& rep);

// Automata share one wire shape: atoms, states, initial, accepting (where the
// automaton has an acceptance set), and transitions as
//   {"src": name, "letter": [atom names], "dst": name}.
// Counter automata add "cc": "skip"|"inc"|"reset" per transition; Streett
// automata replace "accepting" with
//   "streett_pairs": [{"trigger": [names], "goal": [names]}].
// State names must be unique for the round trip to be well defined; loaders
// reject duplicates and unknown names.
json nfw_to_json(const Nfw& a);
Nfw nfw_from_json(const json& j);
json nbw_to_json(const Nbw& a);
Nbw nbw_from_json(const json& j);
json bautomaton_to_json(const BAutomaton& a);
BAutomaton bautomaton_from_json(const json& j);
json streett_to_json(const StreettAutomaton& a);
StreettAutomaton streett_from_json(const json& j);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);
ProcessTemplate load_template_file(const std::string& path);

}  // namespace pmcp
