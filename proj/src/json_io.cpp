#include "pmcp/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace pmcp {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw std::runtime_error("template json: " + msg); }

Kind kind_from_string(const std::string& s) {
  if (s == "r") return Kind::R;
  if (s == "rb") return Kind::RB;
  if (s == "rba") return Kind::RBA;
  bad("unknown kind \"" + s + "\"");
}

}  // namespace

json template_to_json(const ProcessTemplate& tpl) {
  json j;
  j["kind"] = std::string(kind_name(tpl.kind));
  j["k"] = tpl.k;
  j["atoms"] = tpl.atoms;
  j["states"] = tpl.states;
  json init = json::array();
  for (State s : tpl.initial) init.push_back(tpl.states[s]);
  j["initial"] = init;
  json labels = json::object();
  for (State s = 0; s < tpl.states.size(); ++s)
    labels[tpl.states[s]] = tpl.letter_names(tpl.labels[s]);
  j["labels"] = labels;
  json edges = json::array();
  for (const Edge& e : tpl.edges) {
    json je;
    je["src"] = tpl.states[e.src];
    je["dst"] = tpl.states[e.dst];
    switch (e.label.type) {
      case EdgeLabel::Type::Rendezvous:
        je["label"] = {{"action", tpl.actions[e.label.action]}, {"index", e.label.index}};
        break;
      case EdgeLabel::Type::Broadcast:
        je["label"] = "broadcast";
        break;
      case EdgeLabel::Type::Snd:
        je["label"] = {{"action", tpl.actions[e.label.action]}, {"role", "snd"}};
        break;
      case EdgeLabel::Type::Rcv:
        je["label"] = {{"action", tpl.actions[e.label.action]}, {"role", "rcv"}};
        break;
    }
    edges.push_back(std::move(je));
  }
  j["edges"] = edges;
  return j;
}

ProcessTemplate template_from_json(const json& j) {
  if (!j.is_object()) bad("not an object");
  ProcessTemplate tpl;
  if (!j.contains("kind") || !j["kind"].is_string()) bad("missing kind");
  tpl.kind = kind_from_string(j["kind"].get<std::string>());
  if (!j.contains("k") || !j["k"].is_number_unsigned()) bad("missing k");
  tpl.k = j["k"].get<uint32_t>();

  auto names = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array()) bad(std::string("missing ") + key);
    std::vector<std::string> out;
    for (const auto& v : j[key]) {
      if (!v.is_string()) bad(std::string(key) + " entries must be strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  tpl.atoms = names("atoms");
  if (tpl.atoms.size() > 64) bad("more than 64 atoms");
  tpl.states = names("states");
  tpl.labels.assign(tpl.states.size(), 0);

  for (const auto& n : names("initial")) {
    int s = tpl.state_id(n);
    if (s < 0) bad("unknown initial state \"" + n + "\"");
    tpl.initial.push_back(static_cast<State>(s));
  }

  if (j.contains("labels")) {
    if (!j["labels"].is_object()) bad("labels must be an object");
    for (const auto& [name, arr] : j["labels"].items()) {
      int s = tpl.state_id(name);
      if (s < 0) bad("label for unknown state \"" + name + "\"");
      if (!arr.is_array()) bad("label of " + name + " must be an array");
      Letter l = 0;
      for (const auto& a : arr) {
        if (!a.is_string()) bad("atoms must be strings");
        int id = tpl.atom_id(a.get<std::string>());
        if (id < 0) bad("unknown atom \"" + a.get<std::string>() + "\"");
        l |= Letter{1} << id;
      }
      tpl.labels[s] = l;
    }
  }

  if (!j.contains("edges") || !j["edges"].is_array()) bad("missing edges");
  for (const auto& je : j["edges"]) {
    if (!je.is_object() || !je.contains("src") || !je.contains("dst") || !je.contains("label"))
      bad("edge needs src, dst, label");
    Edge e;
    int s = tpl.state_id(je["src"].get<std::string>());
    int t = tpl.state_id(je["dst"].get<std::string>());
    if (s < 0 || t < 0) bad("edge references unknown state");
    e.src = static_cast<State>(s);
    e.dst = static_cast<State>(t);
    const json& lab = je["label"];
    if (lab.is_string()) {
      if (lab.get<std::string>() != "broadcast") bad("unknown edge label string");
      e.label = {EdgeLabel::Type::Broadcast, 0, 0};
    } else if (lab.is_object() && lab.contains("action") && lab.contains("index")) {
      uint32_t a = tpl.add_action(lab["action"].get<std::string>());
      if (!lab["index"].is_number_unsigned()) bad("rendezvous index must be a positive integer");
      e.label = {EdgeLabel::Type::Rendezvous, a, lab["index"].get<uint32_t>()};
    } else if (lab.is_object() && lab.contains("action") && lab.contains("role")) {
      uint32_t a = tpl.add_action(lab["action"].get<std::string>());
      std::string role = lab["role"].get<std::string>();
      if (role != "snd" && role != "rcv") bad("role must be snd or rcv");
      e.label = {role == "snd" ? EdgeLabel::Type::Snd : EdgeLabel::Type::Rcv, a, 0};
    } else {
      bad("unknown edge label shape");
    }
    tpl.edges.push_back(e);
  }
  return tpl;
}

json unwinding_to_json(const UnwoundTemplate& uw) {
  const ProcessTemplate& base = uw.base;
  json comps = json::array();
  for (const Component& c : uw.components) {
    json states = json::array(), init = json::array(), edges = json::array();
    for (State s : c.states) states.push_back(base.states[s]);
    for (State s : c.initial) init.push_back(base.states[s]);
    for (const Edge& e : c.edges)
      edges.push_back({{"src", base.states[e.src]},
                       {"dst", base.states[e.dst]},
                       {"label",
                        {{"action", base.actions[e.label.action]}, {"index", e.label.index}}}});
    comps.push_back({{"index", c.index},
                     {"states", states},
                     {"initial", init},
                     {"edges", edges}});
  }
  json cross = json::array();
  for (const CrossEdge& ce : uw.cross)
    cross.push_back({{"from_component", ce.from_comp},
                     {"src", base.states[ce.src]},
                     {"dst", base.states[ce.dst]},
                     {"to_component", ce.to_comp}});
  return {{"prefix", uw.prefix},
          {"period", uw.period},
          {"components", comps},
          {"cross_edges", cross},
          {"template", template_to_json(uw.flat)}};
}

json edge_type_report_to_json(const UnwoundTemplate& uw, const EdgeTypeReport& rep) {
  const ProcessTemplate& flat = uw.flat;
  json edges = json::array();
  size_t nlocr = 0, ngreen = 0, nlight = 0;
  for (uint32_t e = 0; e < flat.edges.size(); ++e) {
    const Edge& ed = flat.edges[e];
    json je = {{"edge", e},
               {"component", uw.edge_component[e]},
               {"src", flat.states[ed.src]},
               {"dst", flat.states[ed.dst]}};
    if (ed.label.type == EdgeLabel::Type::Rendezvous)
      je["label"] = {{"action", flat.actions[ed.label.action]}, {"index", ed.label.index}};
    else
      je["label"] = "broadcast";
    je["locally_reusable"] = static_cast<bool>(rep.locally_reusable[e]);
    je["green"] = static_cast<bool>(rep.green[e]);
    je["shade"] = rep.shade[e] == Shade::None    ? "none"
                  : rep.shade[e] == Shade::Light ? "light"
                                                 : "dark";
    json wit = json::object();
    if (rep.locr_mu[e].sgn() > 0) wit["locally_reusable"] = rep.locr_mu[e].str();
    if (rep.green_mu[e].sgn() > 0) wit["green"] = rep.green_mu[e].str();
    if (rep.light_mu[e].sgn() > 0) wit["light"] = rep.light_mu[e].str();
    if (!wit.empty()) je["witness"] = wit;
    edges.push_back(std::move(je));

    nlocr += rep.locally_reusable[e];
    ngreen += rep.green[e];
    nlight += rep.shade[e] == Shade::Light;
  }
  return {{"edges", edges},
          {"counts",
           {{"locally_reusable", nlocr},
            {"green", ngreen},
            {"light", nlight},
            {"dark", ngreen - nlight}}}};
}

namespace {

[[noreturn]] void bad_aut(const std::string& msg) {
  throw std::runtime_error("automaton json: " + msg);
}

json aut_to_json(const AutomatonBase& a, const std::vector<uint32_t>* accepting, bool with_cc) {
  json init = json::array();
  for (uint32_t s : a.initial) init.push_back(a.states[s]);
  json ts = json::array();
  for (const AutTransition& t : a.transitions) {
    json jt = {{"src", a.states[t.src]},
               {"letter", a.letter_names(t.letter)},
               {"dst", a.states[t.dst]}};
    if (with_cc) jt["cc"] = std::string(counter_cmd_name(t.cc));
    ts.push_back(std::move(jt));
  }
  json j = {{"atoms", a.atoms},
            {"states", a.states},
            {"initial", std::move(init)},
            {"transitions", std::move(ts)}};
  if (accepting) {
    json acc = json::array();
    for (uint32_t s : *accepting) acc.push_back(a.states[s]);
    j["accepting"] = std::move(acc);
  }
  return j;
}

std::vector<std::string> name_list(const json& j, const char* what) {
  if (!j.is_array()) bad_aut(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const json& v : j) {
    if (!v.is_string()) bad_aut(std::string(what) + " entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

uint32_t state_by_name(const AutomatonBase& a, const std::string& name, const char* where) {
  for (uint32_t s = 0; s < a.states.size(); ++s)
    if (a.states[s] == name) return s;
  bad_aut(std::string(where) + " references unknown state \"" + name + "\"");
}

std::vector<uint32_t> state_set(const AutomatonBase& a, const json& j, const char* what) {
  std::vector<uint32_t> out;
  for (const std::string& n : name_list(j, what)) out.push_back(state_by_name(a, n, what));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void aut_from_json(const json& j, AutomatonBase& a, std::vector<uint32_t>* accepting,
                   bool with_cc) {
  if (!j.is_object()) bad_aut("not an object");
  if (!j.contains("atoms") || !j.contains("states")) bad_aut("missing atoms or states");
  a.atoms = name_list(j["atoms"], "atoms");
  if (a.atoms.size() > 64) bad_aut("more than 64 atoms");
  a.states = name_list(j["states"], "states");
  for (size_t i = 0; i < a.states.size(); ++i)
    for (size_t k = i + 1; k < a.states.size(); ++k)
      if (a.states[i] == a.states[k]) bad_aut("duplicate state \"" + a.states[i] + "\"");
  a.initial = state_set(a, j.contains("initial") ? j["initial"] : json::array(), "initial");
  if (!j.contains("transitions") || !j["transitions"].is_array()) bad_aut("missing transitions");
  for (const json& jt : j["transitions"]) {
    if (!jt.is_object() || !jt.contains("src") || !jt.contains("letter") || !jt.contains("dst"))
      bad_aut("transition needs src, letter, dst");
    AutTransition t;
    t.src = state_by_name(a, jt["src"].get<std::string>(), "transition");
    t.dst = state_by_name(a, jt["dst"].get<std::string>(), "transition");
    Letter l = 0;
    for (const std::string& n : name_list(jt["letter"], "letter")) {
      size_t bit = std::find(a.atoms.begin(), a.atoms.end(), n) - a.atoms.begin();
      if (bit == a.atoms.size()) bad_aut("letter uses unknown atom \"" + n + "\"");
      l |= Letter{1} << bit;
    }
    t.letter = l;
    if (with_cc && jt.contains("cc")) {
      std::string cc = jt["cc"].get<std::string>();
      if (cc == "skip")
        t.cc = CounterCmd::Skip;
      else if (cc == "inc")
        t.cc = CounterCmd::Inc;
      else if (cc == "reset")
        t.cc = CounterCmd::Reset;
      else
        bad_aut("unknown counter command \"" + cc + "\"");
    }
    a.transitions.push_back(t);
  }
  if (accepting)
    *accepting = state_set(a, j.contains("accepting") ? j["accepting"] : json::array(),
                           "accepting");
}

}  // namespace

json nfw_to_json(const Nfw& a) { return aut_to_json(a, &a.accepting, false); }

Nfw nfw_from_json(const json& j) {
  Nfw a;
  aut_from_json(j, a, &a.accepting, false);
  return a;
}

json nbw_to_json(const Nbw& a) { return aut_to_json(a, &a.accepting, false); }

Nbw nbw_from_json(const json& j) {
  Nbw a;
  aut_from_json(j, a, &a.accepting, false);
  return a;
}

json bautomaton_to_json(const BAutomaton& a) { return aut_to_json(a, &a.accepting, true); }

BAutomaton bautomaton_from_json(const json& j) {
  BAutomaton a;
  aut_from_json(j, a, &a.accepting, true);
  return a;
}

json streett_to_json(const StreettAutomaton& a) {
  json j = aut_to_json(a, nullptr, false);
  json pairs = json::array();
  for (const StreettPair& p : a.pairs) {
    json trig = json::array(), goal = json::array();
    for (uint32_t s : p.trigger) trig.push_back(a.states[s]);
    for (uint32_t s : p.goal) goal.push_back(a.states[s]);
    pairs.push_back({{"trigger", std::move(trig)}, {"goal", std::move(goal)}});
  }
  j["streett_pairs"] = std::move(pairs);
  return j;
}

StreettAutomaton streett_from_json(const json& j) {
  StreettAutomaton a;
  aut_from_json(j, a, nullptr, false);
  if (j.contains("streett_pairs")) {
    if (!j["streett_pairs"].is_array()) bad_aut("streett_pairs must be an array");
    for (const json& jp : j["streett_pairs"]) {
      if (!jp.is_object() || !jp.contains("trigger") || !jp.contains("goal"))
        bad_aut("pair needs trigger and goal");
      StreettPair p;
      p.trigger = state_set(a, jp["trigger"], "trigger");
      p.goal = state_set(a, jp["goal"], "goal");
      a.pairs.push_back(std::move(p));
    }
  }
  return a;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

ProcessTemplate load_template_file(const std::string& path) {
  return template_from_json(load_json_file(path));
}

}  // namespace pmcp
