#include "pmcp/cvrs.hpp"

#include <cassert>

#include "pmcp/ratlp.hpp"

namespace pmcp {

Cvrs cvrs_of(const ProcessTemplate& tpl) {
  Cvrs v;
  v.k = tpl.k;
  v.nstates = static_cast<uint32_t>(tpl.states.size());
  v.nactions = static_cast<uint32_t>(tpl.actions.size());
  for (const Edge& e : tpl.edges)
    if (e.label.type == EdgeLabel::Type::Rendezvous)
      v.trans.push_back({e.src, e.label.action, e.label.index, e.dst});
  return v;
}

std::vector<uint32_t> config_support(const CvrsConfig& c) {
  std::vector<uint32_t> out;
  for (uint32_t s = 0; s < c.size(); ++s)
    if (c[s].sgn() > 0) out.push_back(s);
  return out;
}

StepResult step(const Cvrs& v, const CvrsConfig& cfg, const StepTuple& tup) {
  StepResult res;
  if (tup.t.size() != v.k) {
    res.error = "tuple must bind every rendezvous slot";
    return res;
  }
  if (tup.alpha.sgn() <= 0) {
    res.error = "multiplicity must be positive";
    return res;
  }
  uint32_t action = v.trans[tup.t[0]].action;
  for (uint32_t i = 0; i < v.k; ++i) {
    const auto& tr = v.trans[tup.t[i]];
    if (tr.action != action || tr.index != i + 1) {
      res.error = "tuple slots must carry one action with indices 1..k";
      return res;
    }
  }

  CvrsConfig need(cfg.size(), Rat(0));
  for (uint32_t i = 0; i < v.k; ++i) need[v.trans[tup.t[i]].src] += tup.alpha;
  for (uint32_t s = 0; s < cfg.size(); ++s) {
    if (cfg[s] < need[s]) {
      res.error = "insufficient mass at state " + std::to_string(s);
      return res;
    }
  }

  res.cfg = cfg;
  for (uint32_t i = 0; i < v.k; ++i) {
    const auto& tr = v.trans[tup.t[i]];
    res.cfg[tr.src] -= tup.alpha;
    res.cfg[tr.dst] += tup.alpha;
  }
  res.ok = true;
  return res;
}

CvrsTrace scale_trace(const CvrsTrace& tr, const Rat& gamma) {
  assert(gamma.sgn() > 0);
  CvrsTrace out = tr;
  for (Rat& x : out.start) x *= gamma;
  for (StepTuple& st : out.steps) st.alpha *= gamma;
  return out;
}

CvrsTrace shift_trace(const CvrsTrace& tr, const CvrsConfig& add) {
  CvrsTrace out = tr;
  assert(add.size() == out.start.size());
  for (size_t s = 0; s < add.size(); ++s) {
    assert(add[s].sgn() >= 0);
    out.start[s] += add[s];
  }
  return out;
}

CvrsTrace concat_traces(const CvrsTrace& a, const CvrsTrace& b) {
  CvrsTrace out = a;
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return out;
}

std::optional<CvrsConfig> trace_end(const Cvrs& v, const CvrsTrace& tr) {
  CvrsConfig cur = tr.start;
  for (const StepTuple& st : tr.steps) {
    StepResult r = step(v, cur, st);
    if (!r.ok) return std::nullopt;
    cur = std::move(r.cfg);
  }
  return cur;
}

namespace {

std::vector<uint32_t> closure(const Cvrs& v, const CvrsConfig& c,
                              const std::vector<uint32_t>& sub, bool forward) {
  std::vector<bool> in(v.nstates, false);
  for (uint32_t s = 0; s < c.size(); ++s)
    if (c[s].sgn() > 0) in[s] = true;

  bool changed = true;
  while (changed) {
    changed = false;
    for (uint32_t a = 0; a < v.nactions; ++a) {
      bool full = true;
      for (uint32_t i = 1; i <= v.k && full; ++i) {
        bool slot = false;
        for (uint32_t t : sub) {
          const auto& tr = v.trans[t];
          if (tr.action == a && tr.index == i && in[forward ? tr.src : tr.dst]) slot = true;
        }
        full = slot;
      }
      if (!full) continue;
      for (uint32_t t : sub) {
        const auto& tr = v.trans[t];
        if (tr.action != a || !in[forward ? tr.src : tr.dst]) continue;
        uint32_t grow = forward ? tr.dst : tr.src;
        if (!in[grow]) {
          in[grow] = true;
          changed = true;
        }
      }
    }
  }

  std::vector<uint32_t> out;
  for (uint32_t s = 0; s < v.nstates; ++s)
    if (in[s]) out.push_back(s);
  return out;
}

}  // namespace

std::vector<uint32_t> forw(const Cvrs& v, const CvrsConfig& c, const std::vector<uint32_t>& sub) {
  return closure(v, c, sub, true);
}

std::vector<uint32_t> back(const Cvrs& v, const CvrsConfig& c, const std::vector<uint32_t>& sub) {
  return closure(v, c, sub, false);
}

bool check_reach_certificate(const Cvrs& v, const CvrsConfig& c, const CvrsConfig& cp,
                             const std::vector<Rat>& mu) {
  assert(mu.size() == v.trans.size());
  assert(c.size() == v.nstates && cp.size() == v.nstates);

  // (1) flow
  for (uint32_t s = 0; s < v.nstates; ++s) {
    Rat lhs = c[s];
    for (size_t t = 0; t < v.trans.size(); ++t) {
      if (mu[t].is_zero()) continue;
      if (v.trans[t].dst == s) lhs += mu[t];
      if (v.trans[t].src == s) lhs -= mu[t];
    }
    if (lhs != cp[s]) return false;
  }

  // (2) per-action slot balance
  for (uint32_t a = 0; a < v.nactions; ++a) {
    std::vector<Rat> per_index(v.k + 1, Rat(0));
    for (size_t t = 0; t < v.trans.size(); ++t)
      if (v.trans[t].action == a) per_index[v.trans[t].index] += mu[t];
    for (uint32_t i = 2; i <= v.k; ++i)
      if (per_index[i] != per_index[1]) return false;
  }

  // (3) support conditions on the participating transitions
  std::vector<uint32_t> used;
  for (size_t t = 0; t < v.trans.size(); ++t)
    if (mu[t].sgn() > 0) used.push_back(static_cast<uint32_t>(t));
  std::vector<uint32_t> fw = forw(v, c, used);
  std::vector<uint32_t> bk = back(v, cp, used);
  if (fw != bk) return false;
  std::vector<bool> in_fw(v.nstates, false), in_bk(v.nstates, false);
  for (uint32_t s : fw) in_fw[s] = true;
  for (uint32_t s : bk) in_bk[s] = true;
  for (uint32_t t : used) {
    if (!in_bk[v.trans[t].src]) return false;
    if (!in_fw[v.trans[t].dst]) return false;
  }
  return true;
}

ReachResult cvrs_reachable(const Cvrs& v, const CvrsConfig& c, const CvrsConfig& cp) {
  assert(c.size() == v.nstates && cp.size() == v.nstates);
  ReachResult res;
  res.mu.assign(v.trans.size(), Rat(0));

  std::vector<uint32_t> allowed;
  for (uint32_t t = 0; t < v.trans.size(); ++t) allowed.push_back(t);

  // Support refinement to a fixed point. The scale variable sigma turns the
  // fixed-endpoint flow equation into a homogeneous system so that probe
  // solutions add.
  std::vector<Rat> final_mu;
  for (;;) {
    LinearSystem sys;
    for (uint32_t t : allowed) sys.add_var("m" + std::to_string(t));
    size_t sigma = sys.add_var("sigma");

    for (uint32_t s = 0; s < v.nstates; ++s) {
      std::vector<Rat> row(sys.vars.size(), Rat(0));
      for (size_t i = 0; i < allowed.size(); ++i) {
        const auto& tr = v.trans[allowed[i]];
        if (tr.dst == s) row[i] += Rat(1);
        if (tr.src == s) row[i] -= Rat(1);
      }
      row[sigma] = c[s] - cp[s];
      sys.add_row(std::move(row), LinearSystem::Rel::Eq, Rat(0));
    }
    for (uint32_t a = 0; a < v.nactions; ++a) {
      for (uint32_t i = 2; i <= v.k; ++i) {
        std::vector<Rat> row(sys.vars.size(), Rat(0));
        bool nonzero = false;
        for (size_t j = 0; j < allowed.size(); ++j) {
          const auto& tr = v.trans[allowed[j]];
          if (tr.action != a) continue;
          if (tr.index == i) {
            row[j] += Rat(1);
            nonzero = true;
          }
          if (tr.index == 1) {
            row[j] -= Rat(1);
            nonzero = true;
          }
        }
        if (nonzero) sys.add_row(std::move(row), LinearSystem::Rel::Eq, Rat(0));
      }
    }
    {
      std::vector<Rat> row(sys.vars.size(), Rat(0));
      row[sigma] = Rat(1);
      sys.add_row(std::move(row), LinearSystem::Rel::Ge, Rat(1));
    }

    std::vector<size_t> probes;
    for (size_t i = 0; i < allowed.size(); ++i) probes.push_back(i);
    Solution sum = support_maximal_solution(sys, probes);

    std::vector<uint32_t> used;
    for (size_t i = 0; i < allowed.size(); ++i)
      if (sum.value[i].sgn() > 0) used.push_back(allowed[i]);

    std::vector<uint32_t> fw = forw(v, c, used);
    std::vector<uint32_t> bk = back(v, cp, used);
    std::vector<bool> in_h(v.nstates, false);
    {
      std::vector<bool> in_fw(v.nstates, false);
      for (uint32_t s : fw) in_fw[s] = true;
      for (uint32_t s : bk) in_h[s] = in_fw[s];
    }

    std::vector<uint32_t> next;
    for (uint32_t t : used)
      if (in_h[v.trans[t].src] && in_h[v.trans[t].dst]) next.push_back(t);

    bool stable = next == allowed;
    if (stable || next.empty()) {
      // normalize the surviving solution to scale 1
      final_mu.assign(v.trans.size(), Rat(0));
      if (!next.empty()) {
        const Rat& s = sum.value[allowed.size()];  // sigma of the summed solution
        assert(s.sgn() > 0);
        for (size_t i = 0; i < allowed.size(); ++i) {
          // keep only transitions that survived the restriction
          bool keep = false;
          for (uint32_t t : next)
            if (t == allowed[i]) keep = true;
          if (keep) final_mu[allowed[i]] = sum.value[i] / s;
        }
      }
      break;
    }
    allowed = std::move(next);
  }

  res.reachable = check_reach_certificate(v, c, cp, final_mu);
  if (res.reachable) res.mu = final_mu;
  return res;
}

}  // namespace pmcp
