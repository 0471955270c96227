#include "pmcp/edgetypes.hpp"

#include <algorithm>
#include <cassert>
#include <string>

#include "pmcp/cvrs.hpp"
#include "pmcp/ratlp.hpp"

namespace pmcp {

namespace {

struct FlowSupport {
  std::vector<uint32_t> edges;  // sorted flat edge ids
  std::vector<Rat> mu;          // per flat edge
};

// Per-component homogeneous circulation system over the allowed rendezvous
// edges: mass is conserved at every state, and every slot of an action fires
// equally often. Solutions add, so the support-maximal solution's support is
// exactly the set of edges some broadcast-free cycle can use.
FlowSupport cycle_support(const UnwoundTemplate& uw, const std::vector<bool>& allowed) {
  const ProcessTemplate& flat = uw.flat;
  FlowSupport out;
  out.mu.assign(flat.edges.size(), Rat(0));

  for (uint32_t ci = 0; ci < uw.ncomponents(); ++ci) {
    std::vector<uint32_t> vars;
    for (uint32_t e = 0; e < flat.edges.size(); ++e)
      if (allowed[e] && uw.edge_component[e] == ci &&
          flat.edges[e].label.type == EdgeLabel::Type::Rendezvous)
        vars.push_back(e);
    if (vars.empty()) continue;

    LinearSystem sys;
    for (uint32_t e : vars) sys.add_var("m" + std::to_string(e));

    uint32_t lo = uw.comp_offset[ci];
    uint32_t hi = lo + static_cast<uint32_t>(uw.components[ci].states.size());
    for (uint32_t q = lo; q < hi; ++q) {
      std::vector<Rat> row(vars.size(), Rat(0));
      bool nonzero = false;
      for (size_t i = 0; i < vars.size(); ++i) {
        const Edge& ed = flat.edges[vars[i]];
        if (ed.dst == q) {
          row[i] += Rat(1);
          nonzero = true;
        }
        if (ed.src == q) {
          row[i] -= Rat(1);
          nonzero = true;
        }
      }
      if (nonzero) sys.add_row(std::move(row), LinearSystem::Rel::Eq, Rat(0));
    }
    for (uint32_t a = 0; a < flat.actions.size(); ++a) {
      for (uint32_t l = 2; l <= flat.k; ++l) {
        std::vector<Rat> row(vars.size(), Rat(0));
        bool nonzero = false;
        for (size_t i = 0; i < vars.size(); ++i) {
          const EdgeLabel& lab = flat.edges[vars[i]].label;
          if (lab.action != a) continue;
          if (lab.index == l) {
            row[i] += Rat(1);
            nonzero = true;
          }
          if (lab.index == 1) {
            row[i] -= Rat(1);
            nonzero = true;
          }
        }
        if (nonzero) sys.add_row(std::move(row), LinearSystem::Rel::Eq, Rat(0));
      }
    }

    std::vector<size_t> probes(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) probes[i] = i;
    Solution sum = support_maximal_solution(sys, probes);

    for (size_t i = 0; i < vars.size(); ++i) {
      if (sum.value[i].sgn() > 0) {
        out.edges.push_back(vars[i]);
        out.mu[vars[i]] = sum.value[i];
      }
    }
  }

  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

// Circulation around the loop of the lasso: a joint system where broadcast
// coefficients carry mass between consecutive loop components and rendezvous
// coefficients move it within one. Support refinement drops edges whose
// endpoints fall outside the forward/backward closure between the broadcast
// entry and exit supports, until the surviving sets stabilize.
FlowSupport loop_support(const UnwoundTemplate& uw, uint32_t* iterations) {
  const ProcessTemplate& flat = uw.flat;
  FlowSupport out;
  out.mu.assign(flat.edges.size(), Rat(0));

  const uint32_t nc = uw.ncomponents();
  const uint32_t first = uw.prefix;

  std::vector<std::vector<uint32_t>> T(nc), B(nc);
  for (uint32_t e = 0; e < flat.edges.size(); ++e) {
    uint32_t ci = uw.edge_component[e];
    if (ci < first) continue;
    if (flat.edges[e].label.type == EdgeLabel::Type::Rendezvous)
      T[ci].push_back(e);
    else
      B[ci].push_back(e);
  }
  auto pre = [&](uint32_t ci) { return ci == first ? nc - 1 : ci - 1; };

  Cvrs v = cvrs_of(flat);
  std::vector<int> trans_of(flat.edges.size(), -1);
  {
    uint32_t t = 0;
    for (uint32_t e = 0; e < flat.edges.size(); ++e)
      if (flat.edges[e].label.type == EdgeLabel::Type::Rendezvous)
        trans_of[e] = static_cast<int>(t++);
  }

  size_t total = 0;
  for (uint32_t ci = first; ci < nc; ++ci) total += T[ci].size() + B[ci].size();

  uint32_t rounds = 0;
  for (;;) {
    ++rounds;
    assert(rounds <= total + 1);

    LinearSystem sys;
    std::vector<uint32_t> vars;
    std::vector<int> var_of(flat.edges.size(), -1);
    for (uint32_t ci = first; ci < nc; ++ci) {
      for (uint32_t e : T[ci]) {
        var_of[e] = static_cast<int>(vars.size());
        vars.push_back(e);
        sys.add_var("m" + std::to_string(e));
      }
      for (uint32_t e : B[ci]) {
        var_of[e] = static_cast<int>(vars.size());
        vars.push_back(e);
        sys.add_var("m" + std::to_string(e));
      }
    }

    for (uint32_t ci = first; ci < nc; ++ci) {
      uint32_t lo = uw.comp_offset[ci];
      uint32_t hi = lo + static_cast<uint32_t>(uw.components[ci].states.size());
      for (uint32_t q = lo; q < hi; ++q) {
        std::vector<Rat> row(vars.size(), Rat(0));
        bool nonzero = false;
        for (uint32_t e : B[pre(ci)]) {
          if (flat.edges[e].dst == q) {
            row[var_of[e]] += Rat(1);
            nonzero = true;
          }
        }
        for (uint32_t e : T[ci]) {
          const Edge& ed = flat.edges[e];
          if (ed.dst == q) {
            row[var_of[e]] += Rat(1);
            nonzero = true;
          }
          if (ed.src == q) {
            row[var_of[e]] -= Rat(1);
            nonzero = true;
          }
        }
        for (uint32_t e : B[ci]) {
          if (flat.edges[e].src == q) {
            row[var_of[e]] -= Rat(1);
            nonzero = true;
          }
        }
        if (nonzero) sys.add_row(std::move(row), LinearSystem::Rel::Eq, Rat(0));
      }
      for (uint32_t a = 0; a < flat.actions.size(); ++a) {
        for (uint32_t l = 2; l <= flat.k; ++l) {
          std::vector<Rat> row(vars.size(), Rat(0));
          bool nonzero = false;
          for (uint32_t e : T[ci]) {
            const EdgeLabel& lab = flat.edges[e].label;
            if (lab.action != a) continue;
            if (lab.index == l) {
              row[var_of[e]] += Rat(1);
              nonzero = true;
            }
            if (lab.index == 1) {
              row[var_of[e]] -= Rat(1);
              nonzero = true;
            }
          }
          if (nonzero) sys.add_row(std::move(row), LinearSystem::Rel::Eq, Rat(0));
        }
      }
    }

    std::vector<size_t> probes(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) probes[i] = i;
    Solution sum = support_maximal_solution(sys, probes);

    auto positive = [&](uint32_t e) { return sum.value[var_of[e]].sgn() > 0; };

    std::vector<std::vector<uint32_t>> nextT(nc), nextB(nc);
    bool changed = false;
    for (uint32_t ci = first; ci < nc; ++ci) {
      CvrsConfig cin(flat.states.size(), Rat(0));
      CvrsConfig cout(flat.states.size(), Rat(0));
      for (uint32_t e : B[pre(ci)])
        if (positive(e)) cin[flat.edges[e].dst] += sum.value[var_of[e]];
      for (uint32_t e : B[ci])
        if (positive(e)) cout[flat.edges[e].src] += sum.value[var_of[e]];

      std::vector<uint32_t> sub;
      for (uint32_t e : T[ci]) sub.push_back(static_cast<uint32_t>(trans_of[e]));
      std::vector<uint32_t> fw = forw(v, cin, sub);
      std::vector<uint32_t> bk = back(v, cout, sub);
      std::vector<bool> in_h(flat.states.size(), false);
      {
        std::vector<bool> in_fw(flat.states.size(), false);
        for (uint32_t s : fw) in_fw[s] = true;
        for (uint32_t s : bk) in_h[s] = in_fw[s];
      }

      for (uint32_t e : T[ci]) {
        const Edge& ed = flat.edges[e];
        if (positive(e) && in_h[ed.src] && in_h[ed.dst]) nextT[ci].push_back(e);
      }
      for (uint32_t e : B[ci])
        if (positive(e)) nextB[ci].push_back(e);

      if (nextT[ci] != T[ci] || nextB[ci] != B[ci]) changed = true;
    }

    if (!changed) {
      for (uint32_t ci = first; ci < nc; ++ci) {
        for (uint32_t e : T[ci]) {
          out.edges.push_back(e);
          out.mu[e] = sum.value[var_of[e]];
        }
        for (uint32_t e : B[ci]) {
          out.edges.push_back(e);
          out.mu[e] = sum.value[var_of[e]];
        }
      }
      break;
    }
    T = std::move(nextT);
    B = std::move(nextB);
  }

  if (iterations) *iterations = rounds;
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

std::vector<bool> mask_of(const std::vector<uint32_t>& edges, size_t n) {
  std::vector<bool> m(n, false);
  for (uint32_t e : edges) m[e] = true;
  return m;
}

}  // namespace

std::vector<uint32_t> locally_reusable_edges(const UnwoundTemplate& uw) {
  std::vector<bool> all(uw.flat.edges.size(), true);
  return cycle_support(uw, all).edges;
}

std::vector<uint32_t> green_edges(const UnwoundTemplate& uw) {
  return loop_support(uw, nullptr).edges;
}

std::vector<uint32_t> light_green_edges(const UnwoundTemplate& uw,
                                        const std::vector<uint32_t>& green) {
  return cycle_support(uw, mask_of(green, uw.flat.edges.size())).edges;
}

EdgeTypeReport classify(const UnwoundTemplate& uw) {
  const size_t ne = uw.flat.edges.size();
  EdgeTypeReport rep;
  rep.locally_reusable.assign(ne, false);
  rep.green.assign(ne, false);
  rep.shade.assign(ne, Shade::None);

  std::vector<bool> all(ne, true);
  FlowSupport locr = cycle_support(uw, all);
  FlowSupport green = loop_support(uw, &rep.green_iterations);
  FlowSupport light = cycle_support(uw, mask_of(green.edges, ne));

  for (uint32_t e : locr.edges) rep.locally_reusable[e] = true;
  for (uint32_t e : green.edges) {
    rep.green[e] = true;
    rep.shade[e] = Shade::Dark;
  }
  for (uint32_t e : light.edges) {
    assert(rep.green[e] && rep.locally_reusable[e]);
    rep.shade[e] = Shade::Light;
  }
  rep.locr_mu = std::move(locr.mu);
  rep.green_mu = std::move(green.mu);
  rep.light_mu = std::move(light.mu);
  return rep;
}

}  // namespace pmcp
