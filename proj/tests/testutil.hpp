#pragma once
#include <set>

// Shared helpers for the test binaries: a deterministic RNG, random instance
// generators, and slow reference implementations used as oracles.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pmcp/cvrs.hpp"
#include "pmcp/ratlp.hpp"
#include "pmcp/template.hpp"
#include "pmcp/unwinding.hpp"

namespace testutil {

// SplitMix64: tiny, fully deterministic across platforms.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  uint64_t below(uint64_t n) { return next() % n; }
  // uniform in [lo, hi] inclusive
  int64_t range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
  }
  bool chance(uint32_t num, uint32_t den) { return below(den) < num; }
};

inline pmcp::Rat random_rat(Rng& rng, int64_t lo, int64_t hi, int64_t max_den) {
  return pmcp::Rat(rng.range(lo, hi), static_cast<unsigned long>(rng.range(1, max_den)));
}

inline pmcp::LinearSystem random_system(Rng& rng, size_t max_vars = 5, size_t max_rows = 6) {
  pmcp::LinearSystem sys;
  size_t n = 1 + rng.below(max_vars);
  for (size_t i = 0; i < n; ++i) sys.add_var("x" + std::to_string(i));
  size_t m = rng.below(max_rows + 1);
  for (size_t r = 0; r < m; ++r) {
    std::vector<pmcp::Rat> a(n);
    for (size_t j = 0; j < n; ++j)
      a[j] = rng.chance(2, 3) ? random_rat(rng, -3, 3, 2) : pmcp::Rat(0);
    auto rel = rng.chance(1, 2) ? pmcp::LinearSystem::Rel::Eq : pmcp::LinearSystem::Rel::Ge;
    sys.add_row(std::move(a), rel, random_rat(rng, -2, 2, 2));
  }
  return sys;
}

// Fourier-Motzkin feasibility over the rationals, with the implicit
// nonnegativity constraints materialized. Exponential in principle; row
// normalization, deduplication, and a min-product elimination order keep the
// small test systems tame.
inline bool fm_feasible(const pmcp::LinearSystem& sys) {
  using pmcp::Rat;
  using Row = std::pair<std::vector<Rat>, Rat>;  // a.x >= b
  size_t n = sys.vars.size();

  std::vector<Row> rows;
  for (size_t j = 0; j < n; ++j) {
    std::vector<Rat> a(n, Rat(0));
    a[j] = Rat(1);
    rows.push_back({a, Rat(0)});
  }
  for (const auto& r : sys.rows) {
    rows.push_back({r.a, r.b});
    if (r.rel == pmcp::LinearSystem::Rel::Eq) {
      std::vector<Rat> neg(n);
      for (size_t j = 0; j < n; ++j) neg[j] = -r.a[j];
      rows.push_back({neg, -r.b});
    }
  }

  // Scales each row so its largest |coefficient| is 1, drops rows with no
  // variables (deciding infeasibility on the spot), and dedupes.
  auto compact = [&](std::vector<Row>& rs, bool& infeasible) {
    std::set<std::string> seen;
    std::vector<Row> out;
    for (auto& row : rs) {
      Rat big(0);
      for (const Rat& c : row.first) {
        Rat a = c.sgn() < 0 ? -c : c;
        if (big < a) big = a;
      }
      if (big.is_zero()) {
        if (row.second.sgn() > 0) {
          infeasible = true;
          return;
        }
        continue;
      }
      for (Rat& c : row.first) c /= big;
      row.second /= big;
      std::string key;
      for (const Rat& c : row.first) key += c.str() + "|";
      key += row.second.str();
      if (seen.insert(key).second) out.push_back(std::move(row));
    }
    rs = std::move(out);
  };

  bool infeasible = false;
  compact(rows, infeasible);
  if (infeasible) return false;

  std::vector<bool> done(n, false);
  for (size_t round = 0; round < n; ++round) {
    // eliminate the variable with the fewest pos*neg pairings
    size_t best = n;
    size_t best_cost = SIZE_MAX;
    for (size_t j = 0; j < n; ++j) {
      if (done[j]) continue;
      size_t pos = 0, neg = 0;
      for (const auto& row : rows) {
        int s = row.first[j].sgn();
        pos += s > 0;
        neg += s < 0;
      }
      size_t cost = pos * neg;
      if (cost < best_cost) {
        best_cost = cost;
        best = j;
      }
    }
    size_t j = best;
    done[j] = true;

    std::vector<Row> keep, pos, neg;
    for (auto& row : rows) {
      int s = row.first[j].sgn();
      if (s == 0)
        keep.push_back(std::move(row));
      else if (s > 0)
        pos.push_back(std::move(row));
      else
        neg.push_back(std::move(row));
    }
    for (const auto& p : pos) {
      for (const auto& q : neg) {
        Rat mp = -q.first[j], mq = p.first[j];
        std::vector<Rat> a(n, Rat(0));
        for (size_t i = 0; i < n; ++i) a[i] = mp * p.first[i] + mq * q.first[i];
        keep.push_back({std::move(a), mp * p.second + mq * q.second});
      }
    }
    rows = std::move(keep);
    compact(rows, infeasible);
    if (infeasible) return false;
  }

  for (const auto& row : rows)
    if (row.second.sgn() > 0) return false;
  return true;
}

inline pmcp::Cvrs random_cvrs(Rng& rng, uint32_t max_states = 4, uint32_t max_k = 3,
                              uint32_t max_actions = 2, uint32_t max_trans = 8) {
  pmcp::Cvrs v;
  v.nstates = 1 + static_cast<uint32_t>(rng.below(max_states));
  v.k = 1 + static_cast<uint32_t>(rng.below(max_k));
  v.nactions = 1 + static_cast<uint32_t>(rng.below(max_actions));
  uint32_t m = 1 + static_cast<uint32_t>(rng.below(max_trans));
  for (uint32_t i = 0; i < m; ++i)
    v.trans.push_back({static_cast<pmcp::State>(rng.below(v.nstates)),
                       static_cast<uint32_t>(rng.below(v.nactions)),
                       1 + static_cast<uint32_t>(rng.below(v.k)),
                       static_cast<pmcp::State>(rng.below(v.nstates))});
  return v;
}

// All full same-action tuples applicable at integer config `c` (multiplicity
// one), as lists of transition ids.
inline std::vector<std::vector<uint32_t>> vrs_steps(const pmcp::Cvrs& v,
                                                    const std::vector<int>& c) {
  std::vector<std::vector<uint32_t>> out;
  for (uint32_t a = 0; a < v.nactions; ++a) {
    std::vector<std::vector<uint32_t>> slot(v.k);
    bool full = true;
    for (uint32_t i = 1; i <= v.k; ++i) {
      for (uint32_t t = 0; t < v.trans.size(); ++t)
        if (v.trans[t].action == a && v.trans[t].index == i && c[v.trans[t].src] >= 1)
          slot[i - 1].push_back(t);
      if (slot[i - 1].empty()) full = false;
    }
    if (!full) continue;
    std::vector<size_t> idx(v.k, 0);
    for (;;) {
      std::vector<uint32_t> tup(v.k);
      std::vector<int> need(c.size(), 0);
      bool ok = true;
      for (uint32_t i = 0; i < v.k; ++i) {
        tup[i] = slot[i][idx[i]];
        if (++need[v.trans[tup[i]].src] > c[v.trans[tup[i]].src]) ok = false;
      }
      if (ok) out.push_back(tup);
      size_t j = v.k;
      while (j-- > 0) {
        if (++idx[j] < slot[j].size()) break;
        idx[j] = 0;
      }
      if (j == SIZE_MAX) break;
    }
  }
  return out;
}

inline std::vector<int> vrs_apply(const pmcp::Cvrs& v, const std::vector<int>& c,
                                  const std::vector<uint32_t>& tup) {
  std::vector<int> out = c;
  for (uint32_t t : tup) {
    --out[v.trans[t].src];
    ++out[v.trans[t].dst];
  }
  return out;
}

// Exhaustive integer reachability at multiplicity one. Total mass is
// conserved, so the search space is finite.
inline std::set<std::vector<int>> vrs_reach_set(const pmcp::Cvrs& v, const std::vector<int>& c0) {
  std::set<std::vector<int>> seen{c0};
  std::vector<std::vector<int>> frontier{c0};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& c : frontier)
      for (const auto& tup : vrs_steps(v, c)) {
        auto c2 = vrs_apply(v, c, tup);
        if (seen.insert(c2).second) next.push_back(c2);
      }
    frontier = std::move(next);
  }
  return seen;
}

inline bool vrs_reachable(const pmcp::Cvrs& v, const std::vector<int>& c0,
                          const std::vector<int>& target) {
  return vrs_reach_set(v, c0).count(target) > 0;
}

// A multiset of process states plus how many broadcasts produced it.
struct CounterNode {
  std::vector<uint32_t> cnt;
  uint32_t bcasts = 0;
};

// Exact layered reachability of tpl^n up to process permutation: every
// reachable state multiset together with its broadcast count, cut off after
// maxb broadcasts. R and RB kinds only.
inline std::vector<CounterNode> counter_reach(const pmcp::ProcessTemplate& tpl, uint32_t n,
                                              uint32_t maxb) {
  using namespace pmcp;
  std::set<std::pair<std::vector<uint32_t>, uint32_t>> seen;
  std::vector<CounterNode> out;
  std::deque<CounterNode> work;
  auto push = [&](const std::vector<uint32_t>& cnt, uint32_t b) {
    if (seen.insert({cnt, b}).second) {
      work.push_back({cnt, b});
      out.push_back({cnt, b});
    }
  };

  {
    // every way to place n processes on the initial states
    std::vector<uint32_t> cnt(tpl.states.size(), 0);
    std::function<void(size_t, uint32_t)> place = [&](size_t idx, uint32_t left) {
      if (idx + 1 == tpl.initial.size()) {
        cnt[tpl.initial[idx]] += left;
        push(cnt, 0);
        cnt[tpl.initial[idx]] -= left;
        return;
      }
      for (uint32_t take = 0; take <= left; ++take) {
        cnt[tpl.initial[idx]] += take;
        place(idx + 1, left - take);
        cnt[tpl.initial[idx]] -= take;
      }
    };
    if (!tpl.initial.empty()) place(0, n);
  }

  std::vector<std::vector<std::vector<uint32_t>>> by_slot(
      tpl.actions.size(), std::vector<std::vector<uint32_t>>(tpl.k + 1));
  std::vector<std::vector<uint32_t>> bc_from(tpl.states.size());
  for (uint32_t i = 0; i < tpl.edges.size(); ++i) {
    const pmcp::Edge& e = tpl.edges[i];
    if (e.label.type == pmcp::EdgeLabel::Type::Rendezvous)
      by_slot[e.label.action][e.label.index].push_back(i);
    else if (e.label.type == pmcp::EdgeLabel::Type::Broadcast)
      bc_from[e.src].push_back(i);
  }

  while (!work.empty()) {
    CounterNode node = work.front();
    work.pop_front();

    // rendezvous: pick one edge per slot; sources are reserved as slots are
    // filled so the k participants stay distinct, destinations land at the end
    for (uint32_t a = 0; a < tpl.actions.size(); ++a) {
      bool usable = true;
      for (uint32_t l = 1; l <= tpl.k && usable; ++l)
        if (by_slot[a][l].empty()) usable = false;
      if (!usable) continue;
      std::vector<uint32_t> cnt = node.cnt;
      std::vector<uint32_t> dsts;
      std::function<void(uint32_t)> pick = [&](uint32_t slot) {
        if (slot > tpl.k) {
          std::vector<uint32_t> next = cnt;
          for (uint32_t d : dsts) next[d]++;
          push(next, node.bcasts);
          return;
        }
        for (uint32_t ei : by_slot[a][slot]) {
          const pmcp::Edge& e = tpl.edges[ei];
          if (cnt[e.src] == 0) continue;
          cnt[e.src]--;
          dsts.push_back(e.dst);
          pick(slot + 1);
          dsts.pop_back();
          cnt[e.src]++;
        }
      };
      pick(1);
    }

    // broadcast: every process takes some broadcast edge of its state
    if (node.bcasts < maxb) {
      std::vector<uint32_t> occ;
      bool enabled = true;
      for (uint32_t s = 0; s < node.cnt.size(); ++s)
        if (node.cnt[s]) {
          occ.push_back(s);
          if (bc_from[s].empty()) enabled = false;
        }
      if (enabled && !occ.empty()) {
        std::vector<uint32_t> next(node.cnt.size(), 0);
        std::function<void(size_t)> spread = [&](size_t i) {
          if (i == occ.size()) {
            push(next, node.bcasts + 1);
            return;
          }
          const auto& es = bc_from[occ[i]];
          std::function<void(size_t, uint32_t)> dist = [&](size_t j, uint32_t left) {
            uint32_t dst = tpl.edges[es[j]].dst;
            if (j + 1 == es.size()) {
              next[dst] += left;
              spread(i + 1);
              next[dst] -= left;
              return;
            }
            for (uint32_t take = 0; take <= left; ++take) {
              next[dst] += take;
              dist(j + 1, left - take);
              next[dst] -= take;
            }
          };
          dist(0, node.cnt[occ[i]]);
        };
        spread(0);
      }
    }
  }
  return out;
}

// One witness run per configuration of tpl^n reachable within `depth` steps,
// including the empty run at each initial configuration.
inline std::vector<std::vector<pmcp::GlobalTransition>> sample_runs(
    const pmcp::ProcessTemplate& tpl, uint32_t n, uint32_t depth, size_t max_configs = 20000) {
  using namespace pmcp;
  std::map<Configuration, std::pair<Configuration, GlobalTransition>> parent;
  std::set<Configuration> seen, roots;
  std::deque<std::pair<Configuration, uint32_t>> work;
  std::vector<Configuration> order;

  Configuration cur(n);
  std::function<void(uint32_t)> gen = [&](uint32_t i) {
    if (i == n) {
      roots.insert(cur);
      if (seen.insert(cur).second) {
        work.push_back({cur, 0});
        order.push_back(cur);
      }
      return;
    }
    for (State s : tpl.initial) {
      cur[i] = s;
      gen(i + 1);
    }
  };
  gen(0);

  while (!work.empty() && seen.size() < max_configs) {
    auto [cfg, d] = work.front();
    work.pop_front();
    if (d == depth) continue;
    for (const GlobalTransition& gt : successors(tpl, cfg)) {
      if (!seen.insert(gt.dest).second) continue;
      parent.emplace(gt.dest, std::make_pair(cfg, gt));
      order.push_back(gt.dest);
      work.push_back({gt.dest, d + 1});
    }
  }

  std::vector<std::vector<GlobalTransition>> runs;
  for (const auto& cfg : order) {
    std::vector<GlobalTransition> run;
    Configuration at = cfg;
    while (!roots.count(at)) {
      const auto& [prev, gt] = parent.at(at);
      run.push_back(gt);
      at = prev;
    }
    std::reverse(run.begin(), run.end());
    runs.push_back(std::move(run));
  }
  return runs;
}

inline pmcp::CvrsConfig to_rat_config(const std::vector<int>& c) {
  pmcp::CvrsConfig out;
  for (int x : c) out.push_back(pmcp::Rat(x));
  return out;
}

// Small random template that passes validate_template: every RB state gets a
// broadcast edge, initial states are nonempty, duplicate edges are dropped.
inline pmcp::ProcessTemplate random_template(Rng& rng, bool broadcasts, uint32_t max_states = 3,
                                             uint32_t max_actions = 2, uint32_t max_k = 2) {
  using namespace pmcp;
  ProcessTemplate t;
  t.kind = broadcasts ? Kind::RB : Kind::R;
  t.k = 1 + static_cast<uint32_t>(rng.below(max_k));
  uint32_t ns = 1 + static_cast<uint32_t>(rng.below(max_states));
  for (uint32_t s = 0; s < ns; ++s) t.add_state("s" + std::to_string(s));
  uint32_t na = 1 + static_cast<uint32_t>(rng.below(max_actions));
  for (uint32_t a = 0; a < na; ++a) t.add_action("a" + std::to_string(a));
  for (uint32_t s = 0; s < ns; ++s)
    if (rng.chance(1, 2)) t.initial.push_back(s);
  if (t.initial.empty()) t.initial.push_back(static_cast<State>(rng.below(ns)));

  for (uint32_t a = 0; a < na; ++a) {
    if (rng.chance(1, 4)) continue;  // action stays unused
    for (uint32_t l = 1; l <= t.k; ++l) {
      uint32_t cnt = 1 + static_cast<uint32_t>(rng.below(2));
      for (uint32_t c = 0; c < cnt; ++c)
        t.edges.push_back({static_cast<State>(rng.below(ns)),
                           {EdgeLabel::Type::Rendezvous, a, l},
                           static_cast<State>(rng.below(ns))});
    }
  }
  if (broadcasts) {
    for (uint32_t s = 0; s < ns; ++s) {
      uint32_t cnt = 1 + static_cast<uint32_t>(rng.below(2));
      for (uint32_t c = 0; c < cnt; ++c)
        t.edges.push_back(
            {static_cast<State>(s), {EdgeLabel::Type::Broadcast, 0, 0}, static_cast<State>(rng.below(ns))});
    }
  }
  std::sort(t.edges.begin(), t.edges.end());
  t.edges.erase(std::unique(t.edges.begin(), t.edges.end()), t.edges.end());
  return t;
}

// Flat edges of the unwinding that lie on an integer counter cycle of exactly
// n processes. broadcasts=false explores rendezvous steps inside each single
// component; broadcasts=true starts from the loop components, additionally
// fires broadcast steps (every process moves along some cross edge), and only
// flags edges whose cycle passes through at least one broadcast. `allowed`
// restricts every edge taking part in any step. Exceeding the node budget
// sets *truncated; results are then a lower bound (never false positives).
inline std::vector<bool> cycle_edge_flags(const pmcp::UnwoundTemplate& uw, uint32_t n,
                                          bool broadcasts,
                                          const std::vector<bool>* allowed = nullptr,
                                          size_t budget = 200000, bool* truncated = nullptr) {
  using namespace pmcp;
  const ProcessTemplate& flat = uw.flat;
  std::vector<bool> flags(flat.edges.size(), false);
  if (truncated) *truncated = false;
  if (n == 0) return flags;

  auto ok = [&](uint32_t e) { return !allowed || (*allowed)[e]; };

  std::vector<std::vector<std::vector<uint32_t>>> by_slot(
      flat.actions.size(), std::vector<std::vector<uint32_t>>(flat.k + 1));
  std::vector<std::vector<uint32_t>> cross_from(flat.states.size());
  for (uint32_t e = 0; e < flat.edges.size(); ++e) {
    const Edge& ed = flat.edges[e];
    if (!ok(e)) continue;
    if (ed.label.type == EdgeLabel::Type::Rendezvous)
      by_slot[ed.label.action][ed.label.index].push_back(e);
    else if (ed.label.type == EdgeLabel::Type::Broadcast)
      cross_from[ed.src].push_back(e);
  }

  std::map<std::vector<uint32_t>, int> id_of;
  std::vector<std::vector<uint32_t>> cfgs;
  std::deque<int> work;
  bool over = false;
  auto node = [&](const std::vector<uint32_t>& cnt) -> int {
    auto it = id_of.find(cnt);
    if (it != id_of.end()) return it->second;
    if (cfgs.size() >= budget) {
      over = true;
      return -1;
    }
    int id = static_cast<int>(cfgs.size());
    id_of.emplace(cnt, id);
    cfgs.push_back(cnt);
    work.push_back(id);
    return id;
  };

  uint32_t c0 = broadcasts ? uw.prefix : 0;
  for (uint32_t ci = c0; ci < uw.ncomponents(); ++ci) {
    uint32_t lo = uw.comp_offset[ci];
    uint32_t sz = static_cast<uint32_t>(uw.components[ci].states.size());
    if (sz == 0) continue;
    std::vector<uint32_t> cnt(flat.states.size(), 0);
    std::function<void(uint32_t, uint32_t)> place = [&](uint32_t i, uint32_t left) {
      if (i + 1 == sz) {
        cnt[lo + i] = left;
        node(cnt);
        cnt[lo + i] = 0;
        return;
      }
      for (uint32_t take = 0; take <= left; ++take) {
        cnt[lo + i] = take;
        place(i + 1, left - take);
        cnt[lo + i] = 0;
      }
    };
    place(0, n);
  }

  struct StepEdge {
    int from, to;
    bool broadcast;
    std::vector<uint32_t> edges;
  };
  std::vector<StepEdge> steps;

  while (!work.empty()) {
    int uid = work.front();
    work.pop_front();
    std::vector<uint32_t> cnt = cfgs[uid];

    for (uint32_t a = 0; a < flat.actions.size(); ++a) {
      bool usable = true;
      for (uint32_t l = 1; l <= flat.k && usable; ++l)
        if (by_slot[a][l].empty()) usable = false;
      if (!usable) continue;
      std::vector<uint32_t> picked;
      std::function<void(uint32_t)> pick = [&](uint32_t slot) {
        if (slot > flat.k) {
          std::vector<uint32_t> next = cnt;
          for (uint32_t e : picked) next[flat.edges[e].dst]++;
          int vid = node(next);
          if (vid >= 0) steps.push_back({uid, vid, false, picked});
          return;
        }
        for (uint32_t e : by_slot[a][slot]) {
          if (cnt[flat.edges[e].src] == 0) continue;
          cnt[flat.edges[e].src]--;
          picked.push_back(e);
          pick(slot + 1);
          picked.pop_back();
          cnt[flat.edges[e].src]++;
        }
      };
      pick(1);
    }

    if (broadcasts) {
      std::vector<uint32_t> occ;
      bool enabled = true;
      for (uint32_t s = 0; s < cnt.size(); ++s)
        if (cnt[s]) {
          occ.push_back(s);
          if (cross_from[s].empty()) enabled = false;
        }
      if (enabled && !occ.empty()) {
        std::vector<uint32_t> next(cnt.size(), 0);
        std::vector<uint32_t> used;
        std::function<void(size_t)> spread = [&](size_t i) {
          if (i == occ.size()) {
            int vid = node(next);
            if (vid >= 0) steps.push_back({uid, vid, true, used});
            return;
          }
          const auto& es = cross_from[occ[i]];
          std::function<void(size_t, uint32_t)> dist = [&](size_t j, uint32_t left) {
            uint32_t dst = flat.edges[es[j]].dst;
            if (j + 1 == es.size()) {
              next[dst] += left;
              if (left) used.push_back(es[j]);
              spread(i + 1);
              if (left) used.pop_back();
              next[dst] -= left;
              return;
            }
            for (uint32_t take = 0; take <= left; ++take) {
              next[dst] += take;
              if (take) used.push_back(es[j]);
              dist(j + 1, left - take);
              if (take) used.pop_back();
              next[dst] -= take;
            }
          };
          dist(0, cnt[occ[i]]);
        };
        spread(0);
      }
    }
  }
  if (truncated) *truncated = over;

  // Kosaraju over the step graph.
  size_t nn = cfgs.size();
  std::vector<std::vector<int>> adj(nn), radj(nn);
  for (const StepEdge& s : steps) {
    adj[s.from].push_back(s.to);
    radj[s.to].push_back(s.from);
  }
  std::vector<int> order;
  order.reserve(nn);
  {
    std::vector<char> vis(nn, 0);
    std::vector<std::pair<int, size_t>> stack;
    for (size_t s = 0; s < nn; ++s) {
      if (vis[s]) continue;
      vis[s] = 1;
      stack.push_back({static_cast<int>(s), 0});
      while (!stack.empty()) {
        auto& [u, i] = stack.back();
        if (i < adj[u].size()) {
          int v = adj[u][i++];
          if (!vis[v]) {
            vis[v] = 1;
            stack.push_back({v, 0});
          }
        } else {
          order.push_back(u);
          stack.pop_back();
        }
      }
    }
  }
  std::vector<int> scc(nn, -1);
  int nscc = 0;
  for (size_t i = order.size(); i-- > 0;) {
    int root = order[i];
    if (scc[root] >= 0) continue;
    std::vector<int> stack{root};
    scc[root] = nscc;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : radj[u])
        if (scc[v] < 0) {
          scc[v] = nscc;
          stack.push_back(v);
        }
    }
    ++nscc;
  }

  std::vector<char> has_bc(nscc, 0);
  for (const StepEdge& s : steps)
    if (s.broadcast && scc[s.from] == scc[s.to]) has_bc[scc[s.from]] = 1;
  for (const StepEdge& s : steps) {
    if (scc[s.from] != scc[s.to]) continue;
    if (broadcasts && !has_bc[scc[s.from]]) continue;
    for (uint32_t e : s.edges) flags[e] = true;
  }
  return flags;
}

}  // namespace testutil
