#include "pmcp/unwinding.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace pmcp {

namespace {

std::vector<State> sorted_unique(std::vector<State> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

uint32_t component_cap(uint32_t requested) {
  if (requested > 0) return requested;
  const char* env = std::getenv("PMCP_MAX_COMPONENTS");
  if (!env) return 256;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (!end || *end != '\0' || v <= 0)
    throw std::invalid_argument("PMCP_MAX_COMPONENTS must be a positive integer");
  return static_cast<uint32_t>(v);
}

}  // namespace

int UnwoundTemplate::flat_state(uint32_t comp, State base_state) const {
  const auto& st = components[comp].states;
  auto it = std::lower_bound(st.begin(), st.end(), base_state);
  if (it == st.end() || *it != base_state) return -1;
  return static_cast<int>(comp_offset[comp] + (it - st.begin()));
}

uint32_t comp_index(const UnwoundTemplate& uw, uint64_t broadcasts) {
  if (broadcasts <= uw.prefix) return static_cast<uint32_t>(broadcasts);
  return uw.prefix + static_cast<uint32_t>((broadcasts - uw.prefix) % uw.period);
}

Component saturate(const ProcessTemplate& base, std::vector<State> seed) {
  Component c;
  c.initial = sorted_unique(std::move(seed));
  std::vector<char> in_s(base.states.size(), 0);
  for (State s : c.initial) in_s[s] = 1;
  std::vector<char> in_r(base.edges.size(), 0);

  // edges with source in the set, per action and position
  std::vector<std::vector<uint32_t>> avail(base.actions.size(),
                                           std::vector<uint32_t>(base.k + 1, 0));
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& row : avail) std::fill(row.begin(), row.end(), 0u);
    for (const Edge& e : base.edges)
      if (e.label.type == EdgeLabel::Type::Rendezvous && in_s[e.src])
        avail[e.label.action][e.label.index]++;
    for (size_t i = 0; i < base.edges.size(); ++i) {
      const Edge& e = base.edges[i];
      if (in_r[i] || e.label.type != EdgeLabel::Type::Rendezvous || !in_s[e.src]) continue;
      bool partners = true;
      for (uint32_t l = 1; l <= base.k && partners; ++l)
        if (l != e.label.index && avail[e.label.action][l] == 0) partners = false;
      if (!partners) continue;
      in_r[i] = 1;
      in_s[e.dst] = 1;
      changed = true;
    }
  }

  for (State s = 0; s < base.states.size(); ++s)
    if (in_s[s]) c.states.push_back(s);
  for (size_t i = 0; i < base.edges.size(); ++i)
    if (in_r[i]) c.edges.push_back(base.edges[i]);
  return c;
}

UnwoundTemplate build_unwinding(const ProcessTemplate& tpl, uint32_t max_components) {
  if (tpl.kind == Kind::RBA)
    throw std::invalid_argument(
        "build_unwinding: asymmetric-broadcast templates must be converted first");
  uint32_t cap = component_cap(max_components);

  UnwoundTemplate uw;
  uw.base = tpl;
  uw.components.push_back(saturate(tpl, tpl.initial));

  // Follow broadcast successors until a component repeats. Two components
  // with equal state and edge sets behave identically from there on, even
  // when their seeds differ, so the comparison ignores the seeds.
  int back = -1;
  while (back < 0) {
    const Component& last = uw.components.back();
    std::vector<char> in_s(tpl.states.size(), 0);
    for (State s : last.states) in_s[s] = 1;
    std::vector<State> seed;
    for (const Edge& e : tpl.edges)
      if (e.label.type == EdgeLabel::Type::Broadcast && in_s[e.src]) seed.push_back(e.dst);
    Component next = saturate(tpl, std::move(seed));
    for (size_t j = 0; j < uw.components.size(); ++j) {
      if (uw.components[j].states == next.states && uw.components[j].edges == next.edges) {
        back = static_cast<int>(j);
        break;
      }
    }
    if (back >= 0) break;
    next.index = uw.ncomponents();
    uw.components.push_back(std::move(next));
    if (uw.components.size() > cap)
      throw ResourceLimitError("unwinding needs more than " + std::to_string(cap) +
                               " components (raise PMCP_MAX_COMPONENTS)");
  }
  uw.prefix = static_cast<uint32_t>(back);
  uw.period = uw.ncomponents() - uw.prefix;

  for (uint32_t i = 0; i < uw.ncomponents(); ++i) {
    std::vector<char> in_s(tpl.states.size(), 0);
    for (State s : uw.components[i].states) in_s[s] = 1;
    uint32_t to = uw.next_component(i);
    for (const Edge& e : tpl.edges)
      if (e.label.type == EdgeLabel::Type::Broadcast && in_s[e.src])
        uw.cross.push_back({i, e.src, e.dst, to});
  }

  uw.flat.kind = tpl.kind;
  uw.flat.k = tpl.k;
  uw.flat.atoms = tpl.atoms;
  uw.flat.actions = tpl.actions;
  uw.comp_offset.assign(uw.ncomponents() + 1, 0);
  for (uint32_t i = 0; i < uw.ncomponents(); ++i) {
    uw.comp_offset[i] = static_cast<uint32_t>(uw.flat.states.size());
    for (State s : uw.components[i].states) {
      std::string name = tpl.states[s] + "#" + std::to_string(i);
      while (uw.flat.state_id(name) >= 0) name += "'";
      uw.flat.add_state(std::move(name), tpl.labels[s]);
      uw.state_component.push_back(i);
      uw.state_base.push_back(s);
    }
  }
  uw.comp_offset.back() = static_cast<uint32_t>(uw.flat.states.size());

  for (State s : uw.components[0].initial)
    uw.flat.initial.push_back(static_cast<State>(uw.flat_state(0, s)));

  auto lift = [&](uint32_t comp, State s) {
    int id = uw.flat_state(comp, s);
    if (id < 0)
      throw std::logic_error("unwinding: state " + tpl.states[s] + " missing from component " +
                             std::to_string(comp));
    return static_cast<State>(id);
  };
  for (uint32_t i = 0; i < uw.ncomponents(); ++i) {
    for (const Edge& e : uw.components[i].edges) {
      uw.flat.edges.push_back({lift(i, e.src), e.label, lift(i, e.dst)});
      uw.edge_component.push_back(i);
    }
    for (const CrossEdge& ce : uw.cross) {
      if (ce.from_comp != i) continue;
      uw.flat.edges.push_back(
          {lift(i, ce.src), {EdgeLabel::Type::Broadcast, 0, 0}, lift(ce.to_comp, ce.dst)});
      uw.edge_component.push_back(i);
    }
  }
  return uw;
}

std::vector<GlobalTransition> wind(const UnwoundTemplate& uw,
                                   const std::vector<GlobalTransition>& run) {
  auto drop = [&](const Configuration& c) {
    Configuration out(c.size());
    for (size_t i = 0; i < c.size(); ++i) out[i] = uw.state_base[c[i]];
    return out;
  };
  std::vector<GlobalTransition> out;
  out.reserve(run.size());
  for (const GlobalTransition& gt : run) {
    GlobalTransition w = gt;
    w.source = drop(gt.source);
    w.dest = drop(gt.dest);
    for (auto& [pid, e] : w.moves) e = {uw.state_base[e.src], e.label, uw.state_base[e.dst]};
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<GlobalTransition> unwind(const UnwoundTemplate& uw,
                                     const std::vector<GlobalTransition>& run) {
  auto lift = [&](const Configuration& c, uint32_t comp) {
    Configuration out(c.size());
    for (size_t i = 0; i < c.size(); ++i) {
      int f = uw.flat_state(comp, c[i]);
      if (f < 0)
        throw std::invalid_argument("unwind: state " + uw.base.states[c[i]] +
                                    " is outside component " + std::to_string(comp) +
                                    "; the input is not a run");
      out[i] = static_cast<State>(f);
    }
    return out;
  };
  uint64_t b = 0;
  std::vector<GlobalTransition> out;
  out.reserve(run.size());
  for (const GlobalTransition& gt : run) {
    if (gt.type == GlobalTransition::Type::AsymBroadcast)
      throw std::invalid_argument("unwind: asymmetric broadcasts are not supported");
    bool bc = gt.type == GlobalTransition::Type::Broadcast;
    uint32_t here = comp_index(uw, b);
    uint32_t there = bc ? comp_index(uw, b + 1) : here;
    GlobalTransition u = gt;
    u.source = lift(gt.source, here);
    u.dest = lift(gt.dest, there);
    for (auto& [pid, e] : u.moves) {
      int fs = uw.flat_state(here, e.src);
      int fd = uw.flat_state(there, e.dst);
      if (fs < 0 || fd < 0)
        throw std::invalid_argument("unwind: edge outside its component; the input is not a run");
      e = {static_cast<State>(fs), e.label, static_cast<State>(fd)};
    }
    out.push_back(std::move(u));
    if (bc) ++b;
  }
  return out;
}

std::string unwinding_to_dot(const UnwoundTemplate& uw) {
  std::ostringstream o;
  o << "digraph unwinding {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (uint32_t i = 0; i < uw.ncomponents(); ++i) {
    const Component& c = uw.components[i];
    o << "  subgraph cluster_" << i << " {\n    label=\"component " << i;
    if (i >= uw.prefix) o << " (loop)";
    o << "\";\n";
    for (State s : c.states) {
      int id = uw.flat_state(i, s);
      o << "    n" << id << " [label=\"" << uw.base.states[s] << "\"";
      if (std::binary_search(c.initial.begin(), c.initial.end(), s)) o << " peripheries=2";
      o << "];\n";
    }
    o << "  }\n";
  }
  for (size_t i = 0; i < uw.flat.edges.size(); ++i) {
    const Edge& e = uw.flat.edges[i];
    o << "  n" << e.src << " -> n" << e.dst;
    if (e.label.type == EdgeLabel::Type::Rendezvous)
      o << " [label=\"" << uw.base.actions[e.label.action] << "_" << e.label.index << "\"]";
    else
      o << " [label=\"b\", style=dashed]";
    o << ";\n";
  }
  o << "}\n";
  return o.str();
}

}  // namespace pmcp
