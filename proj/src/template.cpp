#include "pmcp/template.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace pmcp {

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::R: return "r";
    case Kind::RB: return "rb";
    case Kind::RBA: return "rba";
  }
  return "?";
}

static int find_name(const std::vector<std::string>& v, std::string_view name) {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] == name) return static_cast<int>(i);
  return -1;
}

int ProcessTemplate::state_id(std::string_view name) const { return find_name(states, name); }
int ProcessTemplate::action_id(std::string_view name) const { return find_name(actions, name); }
int ProcessTemplate::atom_id(std::string_view name) const { return find_name(atoms, name); }

State ProcessTemplate::add_state(std::string name, Letter label) {
  states.push_back(std::move(name));
  labels.push_back(label);
  return static_cast<State>(states.size() - 1);
}

uint32_t ProcessTemplate::add_action(std::string name) {
  int id = action_id(name);
  if (id >= 0) return static_cast<uint32_t>(id);
  actions.push_back(std::move(name));
  return static_cast<uint32_t>(actions.size() - 1);
}

uint32_t ProcessTemplate::add_atom(std::string name) {
  int id = atom_id(name);
  if (id >= 0) return static_cast<uint32_t>(id);
  atoms.push_back(std::move(name));
  return static_cast<uint32_t>(atoms.size() - 1);
}

Letter ProcessTemplate::letter_of(const std::vector<std::string>& names) const {
  Letter l = 0;
  for (const auto& n : names) {
    int id = atom_id(n);
    assert(id >= 0);
    l |= Letter{1} << id;
  }
  return l;
}

std::vector<std::string> ProcessTemplate::letter_names(Letter l) const {
  std::vector<std::string> out;
  for (size_t i = 0; i < atoms.size(); ++i)
    if (l >> i & 1) out.push_back(atoms[i]);
  return out;
}

std::vector<std::string> validate_template(const ProcessTemplate& tpl) {
  std::vector<std::string> bad;
  auto flag = [&](std::string msg) { bad.push_back(std::move(msg)); };

  if (tpl.states.empty()) flag("no states");
  if (tpl.initial.empty()) flag("no initial states");
  if (tpl.k < 1) flag("rendezvous arity k must be positive");
  if (tpl.atoms.size() > 64) flag("more than 64 atoms");
  if (tpl.labels.size() != tpl.states.size()) flag("labeling does not cover all states");

  auto dup = [&](const std::vector<std::string>& v, const char* what) {
    std::set<std::string_view> seen;
    for (const auto& n : v)
      if (!seen.insert(n).second) flag(std::string("duplicate ") + what + " name: " + n);
  };
  dup(tpl.states, "state");
  dup(tpl.actions, "action");
  dup(tpl.atoms, "atom");

  for (State s : tpl.initial)
    if (s >= tpl.states.size()) flag("initial state index out of range");
  for (size_t i = 0; i < tpl.labels.size() && tpl.atoms.size() < 64; ++i)
    if (tpl.labels[i] >> tpl.atoms.size())
      flag("label of state " + tpl.states[i] + " uses unknown atoms");

  // Partition action usage so one name cannot be both rendezvous and
  // asymmetric-broadcast.
  std::vector<int> usage(tpl.actions.size(), 0);  // 1 = rendezvous, 2 = asym
  for (size_t i = 0; i < tpl.edges.size(); ++i) {
    const Edge& e = tpl.edges[i];
    std::string where = "edge " + std::to_string(i);
    if (e.src >= tpl.states.size() || e.dst >= tpl.states.size()) {
      flag(where + ": state index out of range");
      continue;
    }
    switch (e.label.type) {
      case EdgeLabel::Type::Rendezvous:
        if (e.label.action >= tpl.actions.size()) {
          flag(where + ": unknown action");
          break;
        }
        if (e.label.index < 1 || e.label.index > tpl.k)
          flag(where + ": rendezvous index " + std::to_string(e.label.index) +
               " outside [1.." + std::to_string(tpl.k) + "]");
        if (usage[e.label.action] == 2)
          flag(where + ": action " + tpl.actions[e.label.action] +
               " used both for rendezvous and asymmetric broadcast");
        usage[e.label.action] |= 1;
        break;
      case EdgeLabel::Type::Broadcast:
        if (tpl.kind != Kind::RB)
          flag(where + ": broadcast edge in " + std::string(kind_name(tpl.kind)) +
               "-kind template");
        break;
      case EdgeLabel::Type::Snd:
      case EdgeLabel::Type::Rcv:
        if (tpl.kind != Kind::RBA)
          flag(where + ": asymmetric broadcast edge in " +
               std::string(kind_name(tpl.kind)) + "-kind template");
        if (e.label.action >= tpl.actions.size()) {
          flag(where + ": unknown action");
          break;
        }
        if (usage[e.label.action] == 1)
          flag(where + ": action " + tpl.actions[e.label.action] +
               " used both for rendezvous and asymmetric broadcast");
        usage[e.label.action] |= 2;
        break;
    }
  }

  if (tpl.kind == Kind::RB) {
    for (State s = 0; s < tpl.states.size(); ++s) {
      bool has = false;
      for (const Edge& e : tpl.edges)
        if (e.src == s && e.label.type == EdgeLabel::Type::Broadcast) has = true;
      if (!has) flag("state " + tpl.states[s] + " has no broadcast edge");
    }
  }

  if (tpl.kind == Kind::RBA) {
    for (uint32_t a = 0; a < tpl.actions.size(); ++a) {
      if (usage[a] != 2) continue;
      for (State s = 0; s < tpl.states.size(); ++s) {
        bool has = false;
        for (const Edge& e : tpl.edges)
          if (e.src == s && e.label.type == EdgeLabel::Type::Rcv && e.label.action == a)
            has = true;
        if (!has)
          flag("state " + tpl.states[s] + " has no " + tpl.actions[a] + "-receive edge");
      }
    }
  }

  return bad;
}

namespace {

// Enumerates one edge choice per slot (odometer, first slot slowest).
bool next_combo(std::vector<size_t>& idx, const std::vector<size_t>& size) {
  for (size_t i = idx.size(); i-- > 0;) {
    if (++idx[i] < size[i]) return true;
    idx[i] = 0;
  }
  return false;
}

}  // namespace

std::vector<GlobalTransition> successors(const ProcessTemplate& tpl, const Configuration& cfg) {
  std::vector<GlobalTransition> out;
  const uint32_t n = static_cast<uint32_t>(cfg.size());

  // Symmetric broadcast: every process picks a broadcast edge.
  if (tpl.kind == Kind::RB) {
    std::vector<std::vector<const Edge*>> avail(n);
    bool ok = true;
    for (uint32_t i = 0; i < n; ++i) {
      for (const Edge& e : tpl.edges)
        if (e.src == cfg[i] && e.label.type == EdgeLabel::Type::Broadcast)
          avail[i].push_back(&e);
      if (avail[i].empty()) ok = false;
    }
    if (ok && n > 0) {
      std::vector<size_t> idx(n, 0), sz(n);
      for (uint32_t i = 0; i < n; ++i) sz[i] = avail[i].size();
      do {
        GlobalTransition t;
        t.type = GlobalTransition::Type::Broadcast;
        t.source = cfg;
        t.dest = cfg;
        for (uint32_t i = 0; i < n; ++i) {
          const Edge& e = *avail[i][idx[i]];
          t.dest[i] = e.dst;
          t.moves.emplace_back(i + 1, e);
        }
        out.push_back(std::move(t));
      } while (next_combo(idx, sz));
    }
  }

  // Asymmetric broadcasts: a sender takes b_snd, everyone else takes b_rcv.
  if (tpl.kind == Kind::RBA) {
    for (uint32_t a = 0; a < tpl.actions.size(); ++a) {
      bool is_asym = false;
      for (const Edge& e : tpl.edges)
        if ((e.label.type == EdgeLabel::Type::Snd || e.label.type == EdgeLabel::Type::Rcv) &&
            e.label.action == a)
          is_asym = true;
      if (!is_asym) continue;
      for (uint32_t snd = 0; snd < n; ++snd) {
        std::vector<std::vector<const Edge*>> avail(n);
        bool ok = true;
        for (uint32_t i = 0; i < n && ok; ++i) {
          auto want = i == snd ? EdgeLabel::Type::Snd : EdgeLabel::Type::Rcv;
          for (const Edge& e : tpl.edges)
            if (e.src == cfg[i] && e.label.type == want && e.label.action == a)
              avail[i].push_back(&e);
          if (avail[i].empty()) ok = false;
        }
        if (!ok) continue;
        std::vector<size_t> idx(n, 0), sz(n);
        for (uint32_t i = 0; i < n; ++i) sz[i] = avail[i].size();
        do {
          GlobalTransition t;
          t.type = GlobalTransition::Type::AsymBroadcast;
          t.action = a;
          t.sender = snd + 1;
          t.source = cfg;
          t.dest = cfg;
          for (uint32_t i = 0; i < n; ++i) {
            const Edge& e = *avail[i][idx[i]];
            t.dest[i] = e.dst;
            t.moves.emplace_back(i + 1, e);
          }
          out.push_back(std::move(t));
        } while (next_combo(idx, sz));
      }
    }
  }

  // Rendezvous: k distinct processes, the one bound to index j takes an a_j
  // edge. Binding tuples in lexicographic order.
  if (n >= tpl.k) {
    for (uint32_t a = 0; a < tpl.actions.size(); ++a) {
      // per index j (1-based), the a_j edges grouped by source state
      std::vector<std::vector<const Edge*>> by_index(tpl.k + 1);
      for (const Edge& e : tpl.edges)
        if (e.label.type == EdgeLabel::Type::Rendezvous && e.label.action == a)
          by_index[e.label.index].push_back(&e);
      bool any = false;
      for (uint32_t j = 1; j <= tpl.k; ++j) any = any || !by_index[j].empty();
      if (!any) continue;

      std::vector<uint32_t> tuple(tpl.k);  // tuple[j-1] = 0-based process bound to j
      std::vector<bool> used(n, false);
      auto rec = [&](auto&& self, uint32_t j) -> void {
        if (j > tpl.k) {
          std::vector<std::vector<const Edge*>> avail(tpl.k);
          bool ok = true;
          for (uint32_t jj = 1; jj <= tpl.k && ok; ++jj) {
            for (const Edge* e : by_index[jj])
              if (e->src == cfg[tuple[jj - 1]]) avail[jj - 1].push_back(e);
            if (avail[jj - 1].empty()) ok = false;
          }
          if (!ok) return;
          std::vector<size_t> idx(tpl.k, 0), sz(tpl.k);
          for (uint32_t jj = 0; jj < tpl.k; ++jj) sz[jj] = avail[jj].size();
          do {
            GlobalTransition t;
            t.type = GlobalTransition::Type::Rendezvous;
            t.action = a;
            t.source = cfg;
            t.dest = cfg;
            for (uint32_t jj = 0; jj < tpl.k; ++jj) {
              const Edge& e = *avail[jj][idx[jj]];
              t.dest[tuple[jj]] = e.dst;
              t.moves.emplace_back(tuple[jj] + 1, e);
            }
            std::sort(t.moves.begin(), t.moves.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            out.push_back(std::move(t));
          } while (next_combo(idx, sz));
          return;
        }
        for (uint32_t p = 0; p < n; ++p) {
          if (used[p]) continue;
          used[p] = true;
          tuple[j - 1] = p;
          self(self, j + 1);
          used[p] = false;
        }
      };
      rec(rec, 1);
    }
  }

  return out;
}

ProjectedRun project_run(const ProcessTemplate& tpl, const std::vector<GlobalTransition>& run,
                         uint32_t process, State start) {
  ProjectedRun out;
  State cur = start;
  out.trace.push_back(tpl.labels[cur]);
  for (const GlobalTransition& t : run) {
    assert(process >= 1 && process <= t.source.size());
    assert(t.source[process - 1] == cur);
    for (const auto& [pid, e] : t.moves) {
      if (pid == process) {
        out.edges.push_back(e);
        cur = e.dst;
        out.trace.push_back(tpl.labels[cur]);
        break;
      }
    }
  }
  return out;
}

ProcessTemplate normalize_arity(const ProcessTemplate& tpl, const std::vector<uint32_t>& declared) {
  assert(declared.size() == tpl.actions.size());
  ProcessTemplate out = tpl;
  std::vector<bool> asym(tpl.actions.size(), false);
  for (const Edge& e : tpl.edges)
    if (e.label.type == EdgeLabel::Type::Snd || e.label.type == EdgeLabel::Type::Rcv)
      asym[e.label.action] = true;
  for (uint32_t a = 0; a < tpl.actions.size(); ++a) {
    if (asym[a] || declared[a] == 0) continue;
    assert(declared[a] <= tpl.k);
    for (uint32_t j = declared[a] + 1; j <= tpl.k; ++j)
      for (State s = 0; s < tpl.states.size(); ++s)
        out.edges.push_back({s, {EdgeLabel::Type::Rendezvous, a, j}, s});
  }
  return out;
}

ProcessTemplate remove_self_loops(const ProcessTemplate& tpl) {
  ProcessTemplate out = tpl;
  std::vector<bool> loops(tpl.states.size(), false);
  for (const Edge& e : tpl.edges)
    if (e.src == e.dst) loops[e.src] = true;

  std::vector<State> hat(tpl.states.size(), 0);
  for (State s = 0; s < tpl.states.size(); ++s) {
    if (!loops[s]) continue;
    std::string name = tpl.states[s] + "^";
    while (out.state_id(name) >= 0) name += "^";
    hat[s] = out.add_state(name, tpl.labels[s]);
  }

  out.edges.clear();
  for (const Edge& e : tpl.edges) {
    if (e.src == e.dst)
      out.edges.push_back({e.src, e.label, hat[e.src]});
    else
      out.edges.push_back(e);
  }
  for (State s = 0; s < tpl.states.size(); ++s) {
    if (!loops[s]) continue;
    for (const Edge& e : tpl.edges) {
      if (e.src != s) continue;
      out.edges.push_back({hat[s], e.label, e.src == e.dst ? e.src : e.dst});
    }
  }
  return out;
}

}  // namespace pmcp
