#include "pmcp/automata.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace pmcp {

std::string_view counter_cmd_name(CounterCmd c) {
  switch (c) {
    case CounterCmd::Skip:
      return "skip";
    case CounterCmd::Inc:
      return "inc";
    case CounterCmd::Reset:
      return "reset";
  }
  return "?";
}

uint32_t AutomatonBase::add_state(std::string name) {
  states.push_back(std::move(name));
  return static_cast<uint32_t>(states.size() - 1);
}

void AutomatonBase::add_transition(uint32_t src, Letter letter, uint32_t dst, CounterCmd cc) {
  transitions.push_back({src, letter, dst, cc});
}

Letter AutomatonBase::letter_of(const std::vector<std::string>& names) const {
  Letter l = 0;
  for (const std::string& n : names) {
    auto it = std::find(atoms.begin(), atoms.end(), n);
    if (it == atoms.end()) throw std::invalid_argument("automaton: unknown atom \"" + n + "\"");
    l |= Letter(1) << (it - atoms.begin());
  }
  return l;
}

std::vector<std::string> AutomatonBase::letter_names(Letter l) const {
  std::vector<std::string> out;
  for (size_t i = 0; i < atoms.size(); ++i)
    if (l >> i & 1) out.push_back(atoms[i]);
  return out;
}

void AutomatonBase::normalize() {
  std::sort(initial.begin(), initial.end());
  initial.erase(std::unique(initial.begin(), initial.end()), initial.end());
  std::sort(transitions.begin(), transitions.end());
  transitions.erase(std::unique(transitions.begin(), transitions.end()), transitions.end());
}

namespace {

void check_base(const AutomatonBase& a, std::vector<std::string>& out) {
  Letter mask =
      a.atoms.size() >= 64 ? ~Letter(0) : (Letter(1) << a.atoms.size()) - 1;
  for (uint32_t s : a.initial)
    if (s >= a.states.size()) out.push_back("initial state out of range");
  for (const AutTransition& t : a.transitions) {
    if (t.src >= a.states.size() || t.dst >= a.states.size())
      out.push_back("transition endpoint out of range");
    if (t.letter & ~mask) out.push_back("letter uses undeclared atoms");
  }
}

void check_set(const std::vector<uint32_t>& set, size_t n, const char* what,
               std::vector<std::string>& out) {
  for (uint32_t s : set)
    if (s >= n) out.push_back(std::string(what) + " state out of range");
}

}  // namespace

std::vector<std::string> validate_automaton(const Nfw& a) {
  std::vector<std::string> out;
  check_base(a, out);
  check_set(a.accepting, a.states.size(), "accepting", out);
  return out;
}

std::vector<std::string> validate_automaton(const Nbw& a) {
  std::vector<std::string> out;
  check_base(a, out);
  check_set(a.accepting, a.states.size(), "accepting", out);
  return out;
}

std::vector<std::string> validate_automaton(const BAutomaton& a) {
  std::vector<std::string> out;
  check_base(a, out);
  check_set(a.accepting, a.states.size(), "accepting", out);
  return out;
}

std::vector<std::string> validate_automaton(const StreettAutomaton& a) {
  std::vector<std::string> out;
  check_base(a, out);
  for (const StreettPair& p : a.pairs) {
    check_set(p.trigger, a.states.size(), "trigger", out);
    check_set(p.goal, a.states.size(), "goal", out);
  }
  return out;
}

std::vector<Letter> run_word(const AutomatonBase& a, const std::vector<uint32_t>& transitions) {
  std::vector<Letter> w;
  w.reserve(transitions.size());
  for (uint32_t t : transitions) w.push_back(a.transitions.at(t).letter);
  return w;
}

Nfw build_exec_nfw(const UnwoundTemplate& uw) {
  const ProcessTemplate& flat = uw.flat;
  Nfw a;
  a.atoms = flat.atoms;
  a.states = flat.states;
  std::string stop = "stop";
  while (std::find(a.states.begin(), a.states.end(), stop) != a.states.end()) stop += "'";
  uint32_t halt = a.add_state(std::move(stop));
  a.initial.assign(flat.initial.begin(), flat.initial.end());
  a.accepting = {halt};
  for (const Edge& e : flat.edges) a.add_transition(e.src, flat.labels[e.src], e.dst);
  for (uint32_t s = 0; s + 1 < a.states.size(); ++s)
    a.add_transition(s, flat.labels[s], halt);
  a.normalize();
  return a;
}

BAutomaton build_exec_bautomaton(const UnwoundTemplate& uw, const EdgeTypeReport& report) {
  const ProcessTemplate& flat = uw.flat;
  if (report.green.size() != flat.edges.size() ||
      report.locally_reusable.size() != flat.edges.size())
    throw std::invalid_argument("build_exec_bautomaton: report does not match the unwinding");
  uint32_t n = static_cast<uint32_t>(flat.states.size());
  BAutomaton b;
  b.atoms = flat.atoms;
  const char* copy_name[3] = {"free:", "green:", "local:"};
  for (int c = 0; c < 3; ++c)
    for (uint32_t s = 0; s < n; ++s) b.add_state(copy_name[c] + flat.states[s]);
  b.initial.assign(flat.initial.begin(), flat.initial.end());  // free copy ids
  for (uint32_t s = 0; s < 3 * n; ++s) b.accepting.push_back(s);
  for (uint32_t e = 0; e < flat.edges.size(); ++e) {
    const Edge& ed = flat.edges[e];
    Letter l = flat.labels[ed.src];
    for (uint32_t c = 0; c < 3; ++c)
      b.add_transition(ed.src, l, c * n + ed.dst, CounterCmd::Inc);
    if (report.green[e]) {
      CounterCmd cc = ed.label.type == EdgeLabel::Type::Broadcast ? CounterCmd::Reset
                      : report.shade[e] == Shade::Dark            ? CounterCmd::Inc
                                                                  : CounterCmd::Skip;
      b.add_transition(n + ed.src, l, n + ed.dst, cc);
    }
    if (report.locally_reusable[e])
      b.add_transition(2 * n + ed.src, l, 2 * n + ed.dst, CounterCmd::Skip);
  }
  b.normalize();
  return b;
}

bool nfw_accepts(const Nfw& a, const std::vector<Letter>& word) {
  std::vector<char> cur(a.states.size(), 0);
  for (uint32_t s : a.initial) cur[s] = 1;
  for (Letter l : word) {
    std::vector<char> next(a.states.size(), 0);
    bool any = false;
    for (const AutTransition& t : a.transitions)
      if (cur[t.src] && t.letter == l) {
        next[t.dst] = 1;
        any = true;
      }
    if (!any) return false;
    cur = std::move(next);
  }
  for (uint32_t s : a.accepting)
    if (cur[s]) return true;
  return false;
}

InclusionResult nfw_inclusion(const Nfw& a, const Nfw& spec) {
  if (a.atoms != spec.atoms) throw std::invalid_argument("nfw_inclusion: atom tables differ");

  std::map<std::pair<uint32_t, Letter>, std::vector<uint32_t>> spec_moves;
  for (const AutTransition& t : spec.transitions) spec_moves[{t.src, t.letter}].push_back(t.dst);

  std::vector<char> a_final(a.states.size(), 0);
  for (uint32_t s : a.accepting) a_final[s] = 1;
  std::vector<char> spec_final(spec.states.size(), 0);
  for (uint32_t s : spec.accepting) spec_final[s] = 1;

  using Subset = std::vector<uint32_t>;  // sorted spec-state set
  struct Node {
    uint32_t as;
    Subset ss;
    int parent;
    Letter via;
  };
  std::vector<Node> nodes;
  std::map<std::pair<uint32_t, Subset>, int> id_of;
  std::deque<int> work;

  auto visit = [&](uint32_t as, Subset ss, int parent, Letter via) {
    auto key = std::make_pair(as, ss);
    if (id_of.count(key)) return;
    if (nodes.size() >= (size_t(1) << 22))
      throw ResourceLimitError("nfw_inclusion: product exceeds the node cap");
    int id = static_cast<int>(nodes.size());
    id_of.emplace(std::move(key), id);
    nodes.push_back({as, std::move(ss), parent, via});
    work.push_back(id);
  };

  Subset init(spec.initial);
  std::sort(init.begin(), init.end());
  init.erase(std::unique(init.begin(), init.end()), init.end());
  for (uint32_t s : a.initial) visit(s, init, -1, 0);

  std::vector<std::vector<const AutTransition*>> a_out(a.states.size());
  for (const AutTransition& t : a.transitions) a_out[t.src].push_back(&t);

  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    uint32_t as = nodes[id].as;
    Subset ss = nodes[id].ss;  // copy: `nodes` grows below
    if (a_final[as]) {
      bool covered = false;
      for (uint32_t s : ss)
        if (spec_final[s]) {
          covered = true;
          break;
        }
      if (!covered) {
        std::vector<Letter> w;
        for (int at = id; nodes[at].parent >= 0; at = nodes[at].parent)
          w.push_back(nodes[at].via);
        std::reverse(w.begin(), w.end());
        return {false, std::move(w)};
      }
    }
    for (const AutTransition* t : a_out[as]) {
      std::set<uint32_t> acc;
      for (uint32_t s : ss) {
        auto it = spec_moves.find({s, t->letter});
        if (it != spec_moves.end()) acc.insert(it->second.begin(), it->second.end());
      }
      visit(t->dst, Subset(acc.begin(), acc.end()), id, t->letter);
    }
  }
  return {true, {}};
}

BAutomaton b_product_nbw(const BAutomaton& b, const Nbw& n) {
  if (b.atoms != n.atoms) throw std::invalid_argument("b_product_nbw: atom tables differ");
  {
    std::vector<char> acc(b.states.size(), 0);
    for (uint32_t s : b.accepting) acc[s] = 1;
    for (size_t s = 0; s < acc.size(); ++s)
      if (!acc[s])
        throw std::invalid_argument("b_product_nbw: the counter side must have a trivial Buechi set");
  }
  std::vector<char> n_acc(n.states.size(), 0);
  for (uint32_t s : n.accepting) n_acc[s] = 1;

  std::vector<std::vector<const AutTransition*>> b_out(b.states.size()), n_out(n.states.size());
  for (const AutTransition& t : b.transitions) b_out[t.src].push_back(&t);
  for (const AutTransition& t : n.transitions) n_out[t.src].push_back(&t);

  BAutomaton p;
  p.atoms = b.atoms;
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> id_of;
  std::deque<std::pair<uint32_t, uint32_t>> work;
  auto node = [&](uint32_t x, uint32_t y) {
    auto it = id_of.find({x, y});
    if (it != id_of.end()) return it->second;
    uint32_t id = p.add_state(b.states[x] + "*" + n.states[y]);
    id_of.emplace(std::make_pair(x, y), id);
    if (n_acc[y]) p.accepting.push_back(id);
    work.push_back({x, y});
    return id;
  };
  for (uint32_t x : b.initial)
    for (uint32_t y : n.initial) p.initial.push_back(node(x, y));
  while (!work.empty()) {
    auto [x, y] = work.front();
    work.pop_front();
    uint32_t from = id_of.at({x, y});
    for (const AutTransition* tb : b_out[x])
      for (const AutTransition* tn : n_out[y])
        if (tb->letter == tn->letter)
          p.add_transition(from, tb->letter, node(tb->dst, tn->dst), tb->cc);
  }
  p.normalize();
  return p;
}

StreettAutomaton b_to_streett(const BAutomaton& b, std::vector<uint32_t>* origin) {
  StreettAutomaton st;
  st.atoms = b.atoms;
  const CounterCmd cmds[3] = {CounterCmd::Skip, CounterCmd::Inc, CounterCmd::Reset};
  for (const std::string& name : b.states)
    for (CounterCmd c : cmds) st.add_state(name + "#" + std::string(counter_cmd_name(c)));
  auto id = [](uint32_t s, CounterCmd c) { return s * 3 + static_cast<uint32_t>(c); };

  for (uint32_t s : b.initial) st.initial.push_back(id(s, CounterCmd::Reset));
  std::sort(st.initial.begin(), st.initial.end());

  if (origin) origin->clear();
  // No normalize() afterwards: `origin` stays index-aligned with transitions.
  for (uint32_t t = 0; t < b.transitions.size(); ++t) {
    const AutTransition& tr = b.transitions[t];
    for (CounterCmd c : cmds) {
      st.add_transition(id(tr.src, c), tr.letter, id(tr.dst, tr.cc));
      if (origin) origin->push_back(t);
    }
  }

  StreettPair buechi, counter;
  for (uint32_t s = 0; s < st.states.size(); ++s) buechi.trigger.push_back(s);
  for (uint32_t s : b.accepting)
    for (CounterCmd c : cmds) buechi.goal.push_back(id(s, c));
  std::sort(buechi.goal.begin(), buechi.goal.end());
  for (uint32_t s = 0; s < b.states.size(); ++s) {
    counter.trigger.push_back(id(s, CounterCmd::Inc));
    counter.goal.push_back(id(s, CounterCmd::Reset));
  }
  st.pairs = {std::move(buechi), std::move(counter)};
  return st;
}

namespace {

// Adjacency with a payload per edge: (destination, payload). The payload is
// a transition index of whatever automaton the graph came from.
using Adj = std::vector<std::vector<std::pair<uint32_t, uint32_t>>>;

// Component ids (count in `count`) of the subgraph induced by `alive`;
// -1 outside it.
std::vector<int> scc_ids(const Adj& g, const std::vector<char>& alive, int& count) {
  size_t n = g.size();
  std::vector<int> comp(n, -1);
  std::vector<uint32_t> order;
  order.reserve(n);
  std::vector<char> vis(n, 0);
  std::vector<std::pair<uint32_t, size_t>> stack;
  for (uint32_t s = 0; s < n; ++s) {
    if (!alive[s] || vis[s]) continue;
    vis[s] = 1;
    stack.push_back({s, 0});
    while (!stack.empty()) {
      auto& [u, i] = stack.back();
      if (i < g[u].size()) {
        uint32_t v = g[u][i++].first;
        if (alive[v] && !vis[v]) {
          vis[v] = 1;
          stack.push_back({v, 0});
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }
  std::vector<std::vector<uint32_t>> rin(n);
  for (uint32_t u = 0; u < n; ++u)
    if (alive[u])
      for (const auto& e : g[u])
        if (alive[e.first]) rin[e.first].push_back(u);
  count = 0;
  for (size_t i = order.size(); i-- > 0;) {
    uint32_t root = order[i];
    if (comp[root] >= 0) continue;
    comp[root] = count;
    std::vector<uint32_t> st{root};
    while (!st.empty()) {
      uint32_t u = st.back();
      st.pop_back();
      for (uint32_t v : rin[u])
        if (comp[v] < 0) {
          comp[v] = count;
          st.push_back(v);
        }
    }
    ++count;
  }
  return comp;
}

// Shortest payload path from `from` to `to` inside `alive`, never passing
// through `from` again in between; with from == to the path is a shortest
// nonempty closed walk. nullopt = unreachable.
std::optional<std::vector<uint32_t>> bfs_path(const Adj& g, const std::vector<char>& alive,
                                              uint32_t from, uint32_t to) {
  size_t n = g.size();
  std::vector<int> pe(n, -1), pn(n, -1);
  std::vector<char> vis(n, 0);
  std::deque<uint32_t> q{from};
  vis[from] = 1;  // the search never re-enters `from`, so with from == to the
                  // result is a shortest nonempty closed walk

  auto finish = [&](uint32_t last_node, uint32_t last_edge) {
    std::vector<uint32_t> path{last_edge};
    for (uint32_t u = last_node; u != from; u = static_cast<uint32_t>(pn[u]))
      path.push_back(static_cast<uint32_t>(pe[u]));
    std::reverse(path.begin(), path.end());
    return path;
  };

  while (!q.empty()) {
    uint32_t u = q.front();
    q.pop_front();
    for (auto [v, t] : g[u]) {
      if (!alive[v]) continue;
      if (v == to) return finish(u, t);
      if (!vis[v]) {
        vis[v] = 1;
        pe[v] = static_cast<int>(t);
        pn[v] = static_cast<int>(u);
        q.push_back(v);
      }
    }
  }
  return std::nullopt;
}

// Closed payload walk from `anchor` through every node of the strongly
// connected set C (sorted, alive inside `alive`).
std::vector<uint32_t> cover_cycle(const Adj& g, const std::vector<uint32_t>& C, uint32_t anchor) {
  std::vector<char> alive(g.size(), 0);
  for (uint32_t u : C) alive[u] = 1;
  std::vector<uint32_t> cyc;
  uint32_t at = anchor;
  for (uint32_t target : C) {
    if (target == anchor) continue;
    auto leg = bfs_path(g, alive, at, target);
    if (!leg) throw std::logic_error("cover_cycle: component not strongly connected");
    cyc.insert(cyc.end(), leg->begin(), leg->end());
    at = target;
  }
  auto back = bfs_path(g, alive, at, anchor);
  if (!back) throw std::logic_error("cover_cycle: component not strongly connected");
  cyc.insert(cyc.end(), back->begin(), back->end());
  return cyc;
}

// Multi-source BFS over the whole graph; returns the payload path from some
// source to the first node satisfying `hit`, together with that node.
std::optional<std::pair<std::vector<uint32_t>, uint32_t>> bfs_to(
    const Adj& g, const std::vector<uint32_t>& sources,
    const std::function<bool(uint32_t)>& hit) {
  size_t n = g.size();
  std::vector<int> pe(n, -1), pn(n, -1);
  std::vector<char> vis(n, 0);
  std::deque<uint32_t> q;
  for (uint32_t s : sources) {
    if (vis[s]) continue;
    vis[s] = 1;
    if (hit(s)) return std::make_pair(std::vector<uint32_t>{}, s);
    q.push_back(s);
  }
  while (!q.empty()) {
    uint32_t u = q.front();
    q.pop_front();
    for (auto [v, t] : g[u]) {
      if (vis[v]) continue;
      vis[v] = 1;
      pe[v] = static_cast<int>(t);
      pn[v] = static_cast<int>(u);
      if (hit(v)) {
        std::vector<uint32_t> path;
        for (uint32_t w = v; pe[w] >= 0; w = static_cast<uint32_t>(pn[w]))
          path.push_back(static_cast<uint32_t>(pe[w]));
        std::reverse(path.begin(), path.end());
        return std::make_pair(std::move(path), v);
      }
      q.push_back(v);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<LassoRun> streett_emptiness(const StreettAutomaton& st) {
  size_t n = st.states.size();
  Adj g(n);
  for (uint32_t t = 0; t < st.transitions.size(); ++t)
    g[st.transitions[t].src].push_back({st.transitions[t].dst, t});

  std::vector<char> reach(n, 0);
  {
    std::deque<uint32_t> q;
    for (uint32_t s : st.initial)
      if (!reach[s]) {
        reach[s] = 1;
        q.push_back(s);
      }
    while (!q.empty()) {
      uint32_t u = q.front();
      q.pop_front();
      for (const auto& e : g[u])
        if (!reach[e.first]) {
          reach[e.first] = 1;
          q.push_back(e.first);
        }
    }
  }

  // Refinement: inside each strongly connected set, a pair whose goal is
  // absent forbids its trigger states from recurring, so they are deleted
  // and the remainder re-examined.
  std::vector<std::vector<uint32_t>> todo;
  {
    std::vector<uint32_t> all;
    for (uint32_t s = 0; s < n; ++s)
      if (reach[s]) all.push_back(s);
    todo.push_back(std::move(all));
  }

  while (!todo.empty()) {
    std::vector<uint32_t> set = std::move(todo.back());
    todo.pop_back();
    if (set.empty()) continue;
    std::vector<char> alive(n, 0);
    for (uint32_t u : set) alive[u] = 1;
    int cnt = 0;
    std::vector<int> comp = scc_ids(g, alive, cnt);
    std::vector<std::vector<uint32_t>> members(cnt);
    for (uint32_t u : set) members[comp[u]].push_back(u);  // stays sorted

    for (int c = 0; c < cnt; ++c) {
      std::vector<uint32_t>& C = members[c];
      bool nontrivial = C.size() > 1;
      if (!nontrivial)
        for (const auto& e : g[C[0]])
          if (e.first == C[0]) {
            nontrivial = true;
            break;
          }
      if (!nontrivial) continue;

      auto in_C = [&](uint32_t s) { return std::binary_search(C.begin(), C.end(), s); };
      std::vector<uint32_t> bad;
      for (const StreettPair& p : st.pairs) {
        bool has_goal = false;
        for (uint32_t s : p.goal)
          if (in_C(s)) {
            has_goal = true;
            break;
          }
        if (has_goal) continue;
        for (uint32_t s : p.trigger)
          if (in_C(s)) bad.push_back(s);
      }

      if (bad.empty()) {
        // Every pair is satisfied by a run whose recurring set is exactly C.
        auto stem = bfs_to(g, st.initial, [&](uint32_t s) { return in_C(s); });
        if (!stem) throw std::logic_error("streett_emptiness: component unreachable");
        return LassoRun{std::move(stem->first), cover_cycle(g, C, stem->second)};
      }
      std::sort(bad.begin(), bad.end());
      bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
      std::vector<uint32_t> rest;
      std::set_difference(C.begin(), C.end(), bad.begin(), bad.end(), std::back_inserter(rest));
      if (!rest.empty()) todo.push_back(std::move(rest));
    }
  }
  return std::nullopt;
}

std::optional<LassoRun> b_emptiness(const BAutomaton& b) {
  std::vector<uint32_t> origin;
  StreettAutomaton st = b_to_streett(b, &origin);
  auto w = streett_emptiness(st);
  if (!w) return std::nullopt;
  LassoRun out;
  for (uint32_t t : w->stem) out.stem.push_back(origin[t]);
  for (uint32_t t : w->cycle) out.cycle.push_back(origin[t]);
  return out;
}

std::optional<LassoRun> b_lasso_run(const BAutomaton& b, const std::vector<Letter>& stem,
                                    const std::vector<Letter>& cycle) {
  if (cycle.empty()) throw std::invalid_argument("b_lasso_run: the word cycle must be nonempty");
  uint32_t m = static_cast<uint32_t>(stem.size() + cycle.size());
  uint32_t loop = static_cast<uint32_t>(stem.size());
  auto word_at = [&](uint32_t pos) { return pos < loop ? stem[pos] : cycle[pos - loop]; };
  auto next_pos = [&](uint32_t pos) { return pos + 1 < m ? pos + 1 : loop; };

  size_t nb = b.states.size();
  size_t N = nb * m;
  auto node = [&](uint32_t s, uint32_t pos) { return s * m + pos; };

  // Product of the automaton with the looped word positions; payloads are
  // transition indices of b.
  Adj g(N);
  for (uint32_t t = 0; t < b.transitions.size(); ++t) {
    const AutTransition& tr = b.transitions[t];
    for (uint32_t pos = 0; pos < m; ++pos)
      if (tr.letter == word_at(pos)) g[node(tr.src, pos)].push_back({node(tr.dst, next_pos(pos)), t});
  }

  std::vector<uint32_t> sources;
  for (uint32_t s : b.initial) sources.push_back(node(s, 0));

  std::vector<char> reach(N, 0);
  {
    std::deque<uint32_t> q;
    for (uint32_t s : sources)
      if (!reach[s]) {
        reach[s] = 1;
        q.push_back(s);
      }
    while (!q.empty()) {
      uint32_t u = q.front();
      q.pop_front();
      for (const auto& e : g[u])
        if (!reach[e.first]) {
          reach[e.first] = 1;
          q.push_back(e.first);
        }
    }
  }

  std::vector<char> acc(nb, 0);
  for (uint32_t s : b.accepting) acc[s] = 1;
  auto buechi = [&](uint32_t u) { return acc[u / m] != 0; };

  // Only positions inside the word loop can recur.
  std::vector<char> region(N, 0);
  for (uint32_t u = 0; u < N; ++u) region[u] = reach[u] && (u % m) >= loop;

  int cnt = 0;
  std::vector<int> comp = scc_ids(g, region, cnt);
  std::vector<std::vector<uint32_t>> members(cnt);
  for (uint32_t u = 0; u < N; ++u)
    if (comp[u] >= 0) members[comp[u]].push_back(u);

  // Edges that stay off the counter, for cycles that never increment.
  Adj quiet(N);
  for (uint32_t u = 0; u < N; ++u)
    for (auto [v, t] : g[u])
      if (b.transitions[t].cc != CounterCmd::Inc) quiet[u].push_back({v, t});

  for (int c = 0; c < cnt; ++c) {
    std::vector<uint32_t>& C = members[c];
    bool nontrivial = C.size() > 1;
    if (!nontrivial)
      for (const auto& e : g[C[0]])
        if (region[e.first] && e.first == C[0]) {
          nontrivial = true;
          break;
        }
    if (!nontrivial) continue;
    bool has_buechi = false;
    for (uint32_t u : C)
      if (buechi(u)) {
        has_buechi = true;
        break;
      }
    if (!has_buechi) continue;

    std::vector<char> aliveC(N, 0);
    for (uint32_t u : C) aliveC[u] = 1;

    // A cycle through a Buechi node with no increment at all.
    {
      int qcnt = 0;
      std::vector<int> qcomp = scc_ids(quiet, aliveC, qcnt);
      std::vector<std::vector<uint32_t>> qmembers(qcnt);
      for (uint32_t u : C)
        if (qcomp[u] >= 0) qmembers[qcomp[u]].push_back(u);
      for (int qc = 0; qc < qcnt; ++qc) {
        const std::vector<uint32_t>& Q = qmembers[qc];
        uint32_t g0 = UINT32_MAX;
        for (uint32_t u : Q)
          if (buechi(u)) {
            g0 = u;
            break;
          }
        if (g0 == UINT32_MAX) continue;
        bool has_cycle = Q.size() > 1;
        if (!has_cycle)
          for (const auto& e : quiet[Q[0]])
            if (aliveC[e.first] && e.first == Q[0]) {
              has_cycle = true;
              break;
            }
        if (!has_cycle) continue;
        std::vector<char> aliveQ(N, 0);
        for (uint32_t u : Q) aliveQ[u] = 1;
        auto cyc = bfs_path(quiet, aliveQ, g0, g0);
        if (!cyc) continue;
        auto stem_path = bfs_to(g, sources, [&](uint32_t u) { return u == g0; });
        if (!stem_path) throw std::logic_error("b_lasso_run: cycle region unreachable");
        return LassoRun{std::move(stem_path->first), std::move(*cyc)};
      }
    }

    // A cycle through a Buechi node and a reset.
    {
      uint32_t g0 = UINT32_MAX;
      for (uint32_t u : C)
        if (buechi(u)) {
          g0 = u;
          break;
        }
      for (uint32_t u : C) {
        for (auto [v, t] : g[u]) {
          if (!aliveC[v] || b.transitions[t].cc != CounterCmd::Reset) continue;
          std::vector<uint32_t> cyc;
          if (u == g0 && v == g0) {
            cyc = {t};
          } else {
            auto to_u = g0 == u ? std::make_optional(std::vector<uint32_t>{})
                                : bfs_path(g, aliveC, g0, u);
            auto back = v == g0 ? std::make_optional(std::vector<uint32_t>{})
                                : bfs_path(g, aliveC, v, g0);
            if (!to_u || !back) continue;
            cyc = *to_u;
            cyc.push_back(t);
            cyc.insert(cyc.end(), back->begin(), back->end());
          }
          auto stem_path = bfs_to(g, sources, [&](uint32_t w) { return w == g0; });
          if (!stem_path) throw std::logic_error("b_lasso_run: cycle region unreachable");
          return LassoRun{std::move(stem_path->first), std::move(cyc)};
        }
      }
    }
  }
  return std::nullopt;
}

bool b_accepts_lasso(const BAutomaton& b, const std::vector<Letter>& stem,
                     const std::vector<Letter>& cycle) {
  return b_lasso_run(b, stem, cycle).has_value();
}

bool nbw_accepts_lasso(const Nbw& n, const std::vector<Letter>& stem,
                       const std::vector<Letter>& cycle) {
  BAutomaton b;
  static_cast<AutomatonBase&>(b) = n;
  for (AutTransition& t : b.transitions) t.cc = CounterCmd::Skip;
  b.accepting = n.accepting;
  return b_accepts_lasso(b, stem, cycle);
}

}  // namespace pmcp
