#include "pmcp/oracle.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace pmcp {

uint32_t CounterConfig::total() const {
  return std::accumulate(counts.begin(), counts.end(), uint32_t{0});
}

CounterConfig count_config(const ProcessTemplate& tpl, const Configuration& cfg) {
  CounterConfig c;
  c.counts.assign(tpl.states.size(), 0);
  for (State s : cfg) {
    if (s >= tpl.states.size()) throw std::invalid_argument("count_config: state out of range");
    ++c.counts[s];
  }
  return c;
}

namespace {

// One counter-level step: the multiset of edges fired together. Rendezvous
// steps list one edge per position, in position order; broadcast steps list
// one edge per process, grouped by source state.
struct CounterStep {
  bool broadcast = false;
  uint32_t action = 0;
  std::vector<uint32_t> edges;

  auto operator<=>(const CounterStep&) const = default;
};

// Per-template edge indexes, built once per search.
struct StepTables {
  // slots[a][j] = ids of the (a, j+1) rendezvous edges, ascending.
  std::vector<std::vector<std::vector<uint32_t>>> slots;
  // bcast[s] = ids of the broadcast edges leaving s, ascending.
  std::vector<std::vector<uint32_t>> bcast;
};

StepTables build_tables(const ProcessTemplate& tpl) {
  if (tpl.kind == Kind::RBA)
    throw std::invalid_argument("counter search: asymmetric-broadcast templates not supported");
  StepTables t;
  t.slots.assign(tpl.actions.size(), std::vector<std::vector<uint32_t>>(tpl.k));
  t.bcast.assign(tpl.states.size(), {});
  for (uint32_t e = 0; e < tpl.edges.size(); ++e) {
    const EdgeLabel& l = tpl.edges[e].label;
    if (l.type == EdgeLabel::Type::Rendezvous)
      t.slots[l.action][l.index - 1].push_back(e);
    else if (l.type == EdgeLabel::Type::Broadcast)
      t.bcast[tpl.edges[e].src].push_back(e);
  }
  return t;
}

CounterConfig apply_step(const ProcessTemplate& tpl, const CounterConfig& c,
                         const CounterStep& st) {
  CounterConfig next = c;
  for (uint32_t e : st.edges) --next.counts[tpl.edges[e].src];
  for (uint32_t e : st.edges) ++next.counts[tpl.edges[e].dst];
  return next;
}

// All counter steps enabled at c, broadcasts first, then rendezvous actions
// in id order with position choices lexicographic.
std::vector<std::pair<CounterStep, CounterConfig>> counter_successors(const ProcessTemplate& tpl,
                                                                      const StepTables& tab,
                                                                      const CounterConfig& c) {
  std::vector<std::pair<CounterStep, CounterConfig>> out;

  // A broadcast moves every process at once, so it is enabled only when each
  // occupied state has a broadcast edge; each occupied state then picks a
  // multiset of its edges, one per resident process.
  std::vector<State> occupied;
  bool can_bcast = tpl.kind == Kind::RB;
  for (State s = 0; s < c.counts.size(); ++s) {
    if (c.counts[s] == 0) continue;
    occupied.push_back(s);
    if (tab.bcast[s].empty()) can_bcast = false;
  }
  if (can_bcast && !occupied.empty()) {
    CounterStep st;
    st.broadcast = true;
    auto rec = [&](auto&& self, size_t i) -> void {
      if (i == occupied.size()) {
        out.emplace_back(st, apply_step(tpl, c, st));
        return;
      }
      State s = occupied[i];
      const std::vector<uint32_t>& es = tab.bcast[s];
      // Compositions of counts[s] over the edges, lexicographic.
      std::vector<uint32_t> pick(es.size(), 0);
      auto comp = [&](auto&& cself, size_t j, uint32_t rem) -> void {
        if (j + 1 == es.size()) {
          pick[j] = rem;
          size_t base = st.edges.size();
          for (size_t q = 0; q < es.size(); ++q)
            st.edges.insert(st.edges.end(), pick[q], es[q]);
          self(self, i + 1);
          st.edges.resize(base);
          return;
        }
        for (uint32_t v = 0; v <= rem; ++v) {
          pick[j] = v;
          cself(cself, j + 1, rem - v);
        }
      };
      comp(comp, 0, c.counts[s]);
    };
    rec(rec, 0);
  }

  // Rendezvous: distinct processes fill positions 1..k, the one at position
  // j taking an (a, j) edge; distinctness is exactly multiset feasibility of
  // the chosen sources.
  CounterConfig work = c;
  for (uint32_t a = 0; a < tpl.actions.size(); ++a) {
    bool complete = true;
    for (uint32_t j = 0; j < tpl.k; ++j)
      if (tab.slots[a][j].empty()) complete = false;
    if (!complete) continue;
    CounterStep st;
    st.action = a;
    auto rec = [&](auto&& self, uint32_t j) -> void {
      if (j == tpl.k) {
        out.emplace_back(st, apply_step(tpl, c, st));
        return;
      }
      for (uint32_t e : tab.slots[a][j]) {
        State s = tpl.edges[e].src;
        if (work.counts[s] == 0) continue;
        --work.counts[s];
        st.edges.push_back(e);
        self(self, j + 1);
        st.edges.pop_back();
        ++work.counts[s];
      }
    };
    rec(rec, 0);
  }
  return out;
}

// A search node: the counter vector followed by search-specific coordinates.
using EncNode = std::vector<uint32_t>;

struct SearchResult {
  std::vector<EncNode> nodes;  // in visit order, layer by layer
  std::vector<uint32_t> parent;
  std::vector<CounterStep> step;  // from the parent; empty at roots
  std::optional<uint32_t> goal;   // shallowest goal, ties broken by node value
};

constexpr uint32_t kNoParent = std::numeric_limits<uint32_t>::max();

// Layer-synchronous BFS. Every layer is fully expanded, merged and sorted
// before the next starts, so the visit order, the parent choices and the
// reported goal do not depend on how the frontier was split across threads.
template <class Expand, class Goal>
SearchResult layered_bfs(std::vector<EncNode> roots, uint32_t max_depth, Expand&& expand,
                         Goal&& goal, bool parallel) {
  SearchResult res;
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

  std::map<EncNode, uint32_t> seen;
  std::vector<uint32_t> frontier;
  for (EncNode& r : roots) {
    uint32_t id = static_cast<uint32_t>(res.nodes.size());
    seen.emplace(r, id);
    res.nodes.push_back(std::move(r));
    res.parent.push_back(kNoParent);
    res.step.emplace_back();
    frontier.push_back(id);
  }
  for (uint32_t id : frontier) {
    if (goal(res.nodes[id])) {
      res.goal = id;
      return res;
    }
  }

  struct Cand {
    EncNode node;
    uint32_t par;
    CounterStep st;
  };
  for (uint32_t d = 0; d < max_depth && !frontier.empty(); ++d) {
    std::vector<Cand> cands;
    auto expand_into = [&](uint32_t fid, std::vector<Cand>& out) {
      for (auto& [st, next] : expand(res.nodes[fid]))
        out.push_back(Cand{std::move(next), fid, std::move(st)});
    };
    if (parallel) {
#pragma omp parallel
      {
        std::vector<Cand> mine;
#pragma omp for schedule(dynamic) nowait
        for (size_t i = 0; i < frontier.size(); ++i) expand_into(frontier[i], mine);
#pragma omp critical
        cands.insert(cands.end(), std::make_move_iterator(mine.begin()),
                     std::make_move_iterator(mine.end()));
      }
    } else {
      for (size_t i = 0; i < frontier.size(); ++i) expand_into(frontier[i], cands);
    }

    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
      return std::tie(x.node, x.par, x.st) < std::tie(y.node, y.par, y.st);
    });
    std::vector<uint32_t> next;
    for (Cand& cd : cands) {
      if (!next.empty() && res.nodes[next.back()] == cd.node) continue;
      if (seen.count(cd.node)) continue;
      uint32_t id = static_cast<uint32_t>(res.nodes.size());
      seen.emplace(cd.node, id);
      res.nodes.push_back(std::move(cd.node));
      res.parent.push_back(cd.par);
      res.step.push_back(std::move(cd.st));
      next.push_back(id);
    }
    for (uint32_t id : next) {
      if (goal(res.nodes[id])) {
        res.goal = id;
        return res;
      }
    }
    frontier = std::move(next);
  }
  return res;
}

constexpr auto kNoGoal = [](const EncNode&) { return false; };

// Distributions of `total` over the slot list, lexicographic by count vector.
template <class F>
void each_distribution(uint32_t total, size_t nslots, F&& fn) {
  std::vector<uint32_t> counts(nslots, 0);
  auto rec = [&](auto&& self, size_t i, uint32_t rem) -> void {
    if (i + 1 == nslots) {
      counts[i] = rem;
      fn(counts);
      return;
    }
    for (uint32_t v = 0; v <= rem; ++v) {
      counts[i] = v;
      self(self, i + 1, rem - v);
    }
  };
  if (nslots > 0) rec(rec, 0, total);
}

// All placements of n processes over the given states, as full count vectors.
std::vector<CounterConfig> placements(size_t nstates, const std::vector<State>& over,
                                      uint32_t n) {
  std::vector<State> sts = over;
  std::sort(sts.begin(), sts.end());
  sts.erase(std::unique(sts.begin(), sts.end()), sts.end());
  std::vector<CounterConfig> out;
  each_distribution(n, sts.size(), [&](const std::vector<uint32_t>& picks) {
    CounterConfig c;
    c.counts.assign(nstates, 0);
    for (size_t i = 0; i < sts.size(); ++i) c.counts[sts[i]] = picks[i];
    out.push_back(std::move(c));
  });
  std::sort(out.begin(), out.end());
  return out;
}

// Rebuilds a concrete run from a counter chain. Processes are numbered by
// state at the start; each rendezvous position takes the lowest unused
// process in its source state, and broadcast edges go to the residents of
// their source state in id order.
OracleRun realize(const ProcessTemplate& tpl, const CounterConfig& start,
                  const std::vector<CounterStep>& steps) {
  OracleRun run;
  for (State s = 0; s < start.counts.size(); ++s)
    run.start.insert(run.start.end(), start.counts[s], s);
  Configuration cur = run.start;
  for (const CounterStep& st : steps) {
    GlobalTransition g;
    g.type = st.broadcast ? GlobalTransition::Type::Broadcast : GlobalTransition::Type::Rendezvous;
    g.action = st.broadcast ? 0 : st.action;
    g.source = cur;
    std::vector<char> taken(cur.size(), 0);
    for (uint32_t e : st.edges) {
      State s = tpl.edges[e].src;
      uint32_t p = 0;
      while (p < cur.size() && !(cur[p] == s && !taken[p])) ++p;
      if (p == cur.size()) throw std::logic_error("realize: infeasible counter step");
      taken[p] = 1;
      g.moves.emplace_back(p + 1, tpl.edges[e]);
    }
    std::sort(g.moves.begin(), g.moves.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    g.dest = cur;
    for (const auto& [p, edge] : g.moves) g.dest[p - 1] = edge.dst;
    cur = g.dest;
    run.steps.push_back(std::move(g));
  }
  return run;
}

// Walks parents back to a root and replays the chain into a concrete run.
OracleRun chain_to_run(const ProcessTemplate& tpl, const SearchResult& r, uint32_t id,
                       size_t nstates) {
  std::vector<CounterStep> steps;
  while (r.parent[id] != kNoParent) {
    steps.push_back(r.step[id]);
    id = r.parent[id];
  }
  std::reverse(steps.begin(), steps.end());
  CounterConfig root;
  root.counts.assign(r.nodes[id].begin(), r.nodes[id].begin() + nstates);
  return realize(tpl, root, steps);
}

std::vector<State> all_states(const ProcessTemplate& tpl) {
  std::vector<State> v(tpl.states.size());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

std::vector<CounterConfig> enumerate_reachable(const ProcessTemplate& tpl, uint32_t n,
                                               uint32_t depth, bool parallel) {
  if (n == 0) throw std::invalid_argument("enumerate_reachable: need at least one process");
  StepTables tab = build_tables(tpl);
  std::vector<EncNode> roots;
  for (CounterConfig& c : placements(tpl.states.size(), tpl.initial, n))
    roots.push_back(std::move(c.counts));
  auto expand = [&](const EncNode& nd) {
    std::vector<std::pair<CounterStep, EncNode>> out;
    for (auto& [st, next] : counter_successors(tpl, tab, CounterConfig{nd}))
      out.emplace_back(std::move(st), std::move(next.counts));
    return out;
  };
  SearchResult r = layered_bfs(std::move(roots), depth, expand, kNoGoal, parallel);
  std::vector<CounterConfig> out;
  out.reserve(r.nodes.size());
  for (EncNode& nd : r.nodes) out.push_back(CounterConfig{std::move(nd)});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ExecutionTrace> executions_upto(const ProcessTemplate& tpl, uint32_t n,
                                            size_t maxlen) {
  if (n == 0) throw std::invalid_argument("executions_upto: need at least one process");
  std::vector<ExecutionTrace> words;
  if (maxlen == 0) return words;

  // Identity BFS for process 1 with the other processes collapsed to a
  // sorted tail; the word is part of the node, so every node contributes its
  // word exactly once.
  std::set<std::pair<Configuration, ExecutionTrace>> seen;
  std::deque<const std::pair<Configuration, ExecutionTrace>*> queue;
  std::set<ExecutionTrace> collected;
  auto visit = [&](Configuration cfg, ExecutionTrace w) {
    std::sort(cfg.begin() + 1, cfg.end());
    auto [it, fresh] = seen.emplace(std::move(cfg), std::move(w));
    if (!fresh) return;
    collected.insert(it->second);
    queue.push_back(&*it);
  };

  std::vector<State> init = tpl.initial;
  std::sort(init.begin(), init.end());
  init.erase(std::unique(init.begin(), init.end()), init.end());
  for (State s0 : init) {
    each_distribution(n - 1, init.size(), [&](const std::vector<uint32_t>& picks) {
      Configuration cfg{s0};
      for (size_t i = 0; i < init.size(); ++i) cfg.insert(cfg.end(), picks[i], init[i]);
      visit(std::move(cfg), ExecutionTrace{tpl.labels[s0]});
    });
  }

  while (!queue.empty()) {
    const auto& [cfg, w] = *queue.front();
    queue.pop_front();
    for (const GlobalTransition& t : successors(tpl, cfg)) {
      bool moved = false;
      for (const auto& [p, edge] : t.moves)
        if (p == 1) moved = true;
      ExecutionTrace w2 = w;
      if (moved) {
        if (w.size() == maxlen) continue;
        w2.push_back(tpl.labels[t.dest[0]]);
      }
      visit(t.dest, std::move(w2));
    }
  }
  words.assign(collected.begin(), collected.end());
  return words;
}

std::optional<OracleRun> pseudo_cycle_search(const UnwoundTemplate& uw,
                                             const PseudoCycleQuery& q, bool parallel) {
  const ProcessTemplate& tpl = uw.flat;
  if (q.edge >= tpl.edges.size())
    throw std::invalid_argument("pseudo_cycle_search: edge out of range");
  if (q.legal_only && q.broadcasts != 0 && q.broadcasts != uw.period)
    throw std::invalid_argument("pseudo_cycle_search: broadcast count must be 0 or the period");
  const size_t ns = tpl.states.size();
  StepTables tab = build_tables(tpl);

  // Start placements: with no broadcasts the run never leaves a component,
  // so only the target edge's own component matters; with period-many the
  // run walks the loop once, so it starts where the loop begins.
  std::vector<State> span;
  if (!q.legal_only) {
    span = all_states(tpl);
  } else {
    uint32_t comp = q.broadcasts == 0 ? uw.edge_component[q.edge] : uw.prefix;
    for (State b : uw.components[comp].states)
      span.push_back(static_cast<State>(uw.flat_state(comp, b)));
  }

  for (uint32_t m = 1; m <= q.max_processes; ++m) {
    for (const CounterConfig& c0 : placements(ns, span, m)) {
      EncNode root = c0.counts;
      root.push_back(0);  // target edge taken
      root.push_back(0);  // broadcasts so far
      EncNode want = c0.counts;
      want.push_back(1);
      want.push_back(q.broadcasts);
      auto expand = [&](const EncNode& nd) {
        CounterConfig c{std::vector<uint32_t>(nd.begin(), nd.begin() + ns)};
        std::vector<std::pair<CounterStep, EncNode>> out;
        for (auto& [st, next] : counter_successors(tpl, tab, c)) {
          uint32_t nb = nd[ns + 1] + (st.broadcast ? 1 : 0);
          if (nb > q.broadcasts) continue;
          bool used = nd[ns] != 0 ||
                      std::find(st.edges.begin(), st.edges.end(), q.edge) != st.edges.end();
          EncNode e2 = std::move(next.counts);
          e2.push_back(used ? 1 : 0);
          e2.push_back(nb);
          out.emplace_back(std::move(st), std::move(e2));
        }
        return out;
      };
      auto goal = [&](const EncNode& nd) { return nd == want; };
      SearchResult r = layered_bfs({root}, std::numeric_limits<uint32_t>::max(), expand, goal,
                                   parallel);
      if (r.goal) return chain_to_run(tpl, r, *r.goal, ns);
    }
  }
  return std::nullopt;
}

std::optional<OracleRun> load_state_search(const ProcessTemplate& tpl, uint32_t n,
                                           uint32_t broadcasts, State target, bool parallel) {
  if (n == 0) throw std::invalid_argument("load_state_search: need at least one process");
  if (target >= tpl.states.size())
    throw std::invalid_argument("load_state_search: state out of range");
  const size_t ns = tpl.states.size();
  StepTables tab = build_tables(tpl);
  std::vector<EncNode> roots;
  for (CounterConfig& c : placements(ns, tpl.initial, n)) {
    EncNode r = std::move(c.counts);
    r.push_back(0);  // broadcasts so far
    roots.push_back(std::move(r));
  }
  auto expand = [&](const EncNode& nd) {
    CounterConfig c{std::vector<uint32_t>(nd.begin(), nd.begin() + ns)};
    std::vector<std::pair<CounterStep, EncNode>> out;
    for (auto& [st, next] : counter_successors(tpl, tab, c)) {
      uint32_t nb = nd[ns] + (st.broadcast ? 1 : 0);
      if (nb > broadcasts) continue;
      EncNode e2 = std::move(next.counts);
      e2.push_back(nb);
      out.emplace_back(std::move(st), std::move(e2));
    }
    return out;
  };
  auto goal = [&](const EncNode& nd) { return nd[target] > 0 && nd[ns] == broadcasts; };
  SearchResult r = layered_bfs(std::move(roots), std::numeric_limits<uint32_t>::max(), expand,
                               goal, parallel);
  if (!r.goal) return std::nullopt;
  return chain_to_run(tpl, r, *r.goal, ns);
}

OracleRun compose_runs(const ProcessTemplate& tpl, const std::vector<OracleRun>& runs,
                       uint32_t n) {
  size_t nbcast = 0;
  for (size_t i = 0; i < runs.size(); ++i) {
    size_t cnt = 0;
    for (const GlobalTransition& g : runs[i].steps) {
      if (g.type == GlobalTransition::Type::AsymBroadcast)
        throw std::invalid_argument("compose_runs: asymmetric broadcasts cannot be synchronized");
      if (g.type == GlobalTransition::Type::Broadcast) ++cnt;
    }
    if (i == 0)
      nbcast = cnt;
    else if (cnt != nbcast)
      throw std::invalid_argument("compose_runs: broadcast counts differ");
  }

  uint32_t sum = 0;
  for (const OracleRun& r : runs) sum += static_cast<uint32_t>(r.start.size());
  if (n == 0) n = sum;
  if (n < sum) throw std::invalid_argument("compose_runs: host size below the sum of the runs");

  OracleRun out;
  std::vector<uint32_t> offset(runs.size());
  for (size_t i = 0; i < runs.size(); ++i) {
    offset[i] = static_cast<uint32_t>(out.start.size());
    out.start.insert(out.start.end(), runs[i].start.begin(), runs[i].start.end());
  }
  if (n > sum) {
    if (tpl.initial.empty())
      throw std::invalid_argument("compose_runs: no initial state for idle processes");
    out.start.insert(out.start.end(), n - sum, tpl.initial.front());
  }

  Configuration cur = out.start;
  auto append = [&](GlobalTransition g) {
    g.source = cur;
    g.dest = cur;
    for (const auto& [p, edge] : g.moves) g.dest[p - 1] = edge.dst;
    cur = g.dest;
    out.steps.push_back(std::move(g));
  };
  auto shifted_moves = [&](const GlobalTransition& g, uint32_t off) {
    std::vector<std::pair<uint32_t, Edge>> mv = g.moves;
    for (auto& [p, edge] : mv) p += off;
    return mv;
  };

  std::vector<size_t> pos(runs.size(), 0);
  for (size_t phase = 0; phase <= nbcast; ++phase) {
    // One rendezvous step per run per sweep until the whole segment is in.
    bool progress = true;
    while (progress) {
      progress = false;
      for (size_t i = 0; i < runs.size(); ++i) {
        if (pos[i] == runs[i].steps.size()) continue;
        const GlobalTransition& g = runs[i].steps[pos[i]];
        if (g.type != GlobalTransition::Type::Rendezvous) continue;
        GlobalTransition h;
        h.type = g.type;
        h.action = g.action;
        h.moves = shifted_moves(g, offset[i]);
        append(std::move(h));
        ++pos[i];
        progress = true;
      }
    }
    if (phase == nbcast) break;

    GlobalTransition h;
    h.type = GlobalTransition::Type::Broadcast;
    for (size_t i = 0; i < runs.size(); ++i) {
      const GlobalTransition& g = runs[i].steps[pos[i]];
      if (g.type != GlobalTransition::Type::Broadcast)
        throw std::logic_error("compose_runs: segment out of sync");
      auto mv = shifted_moves(g, offset[i]);
      h.moves.insert(h.moves.end(), mv.begin(), mv.end());
      ++pos[i];
    }
    for (uint32_t p = sum + 1; p <= n; ++p) {
      const Edge* pick = nullptr;
      for (const Edge& e : tpl.edges)
        if (e.label.type == EdgeLabel::Type::Broadcast && e.src == cur[p - 1]) {
          pick = &e;
          break;
        }
      if (!pick)
        throw std::invalid_argument("compose_runs: idle process has no broadcast edge");
      h.moves.emplace_back(p, *pick);
    }
    std::sort(h.moves.begin(), h.moves.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    append(std::move(h));
  }
  for (size_t i = 0; i < runs.size(); ++i)
    if (pos[i] != runs[i].steps.size()) throw std::logic_error("compose_runs: leftover steps");
  return out;
}

std::optional<OracleRun> restrict_run(const OracleRun& run, uint32_t first, uint32_t count) {
  if (first == 0 || count == 0 || first - 1 + count > run.start.size())
    throw std::invalid_argument("restrict_run: bad process range");
  auto inside = [&](uint32_t p) { return p >= first && p < first + count; };
  auto slice = [&](const Configuration& cfg) {
    return Configuration(cfg.begin() + (first - 1), cfg.begin() + (first - 1) + count);
  };

  OracleRun out;
  out.start = slice(run.start);
  for (const GlobalTransition& g : run.steps) {
    std::vector<std::pair<uint32_t, Edge>> kept;
    for (const auto& [p, edge] : g.moves)
      if (inside(p)) kept.emplace_back(p - (first - 1), edge);
    if (kept.empty()) continue;
    if (g.type == GlobalTransition::Type::Rendezvous && kept.size() != g.moves.size())
      return std::nullopt;  // the group shares this rendezvous with outsiders
    if (g.type == GlobalTransition::Type::AsymBroadcast && !inside(g.sender))
      return std::nullopt;  // receivers alone are not a run
    GlobalTransition h;
    h.type = g.type;
    h.action = g.action;
    if (g.type == GlobalTransition::Type::AsymBroadcast) h.sender = g.sender - (first - 1);
    h.source = slice(g.source);
    h.dest = slice(g.dest);
    h.moves = std::move(kept);
    out.steps.push_back(std::move(h));
  }
  return out;
}

bool check_bisimulation(const Lts& a, const Lts& b,
                        const std::vector<std::pair<uint32_t, uint32_t>>& relation) {
  auto check_lts = [](const Lts& l) {
    if (l.succ.size() != l.labels.size())
      throw std::invalid_argument("check_bisimulation: malformed transition system");
    for (uint32_t i : l.initial)
      if (i >= l.labels.size())
        throw std::invalid_argument("check_bisimulation: initial state out of range");
    for (const auto& row : l.succ)
      for (uint32_t s : row)
        if (s >= l.labels.size())
          throw std::invalid_argument("check_bisimulation: successor out of range");
  };
  check_lts(a);
  check_lts(b);
  std::set<std::pair<uint32_t, uint32_t>> rel;
  for (const auto& [x, y] : relation) {
    if (x >= a.labels.size() || y >= b.labels.size())
      throw std::invalid_argument("check_bisimulation: related state out of range");
    rel.emplace(x, y);
  }

  for (const auto& [x, y] : rel) {
    if (a.labels[x] != b.labels[y]) return false;
    for (uint32_t x2 : a.succ[x]) {
      bool matched = false;
      for (uint32_t y2 : b.succ[y])
        if (rel.count({x2, y2})) {
          matched = true;
          break;
        }
      if (!matched) return false;
    }
    for (uint32_t y2 : b.succ[y]) {
      bool matched = false;
      for (uint32_t x2 : a.succ[x])
        if (rel.count({x2, y2})) {
          matched = true;
          break;
        }
      if (!matched) return false;
    }
  }
  auto covered = [&](const std::vector<uint32_t>& from, const std::vector<uint32_t>& to,
                     bool left) {
    for (uint32_t i : from) {
      bool ok = false;
      for (uint32_t j : to)
        if (rel.count(left ? std::make_pair(i, j) : std::make_pair(j, i))) {
          ok = true;
          break;
        }
      if (!ok) return false;
    }
    return true;
  };
  return covered(a.initial, b.initial, true) && covered(b.initial, a.initial, false);
}

}  // namespace pmcp
