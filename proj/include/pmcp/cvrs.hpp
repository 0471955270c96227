#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmcp/rational.hpp"
#include "pmcp/template.hpp"

namespace pmcp {

// Counter abstraction of a rendezvous system: configurations count how much
// (rational, nonnegative) mass sits in each state, and a step moves mass
// along one full k-tuple of same-action transitions at a common multiplicity.
struct Cvrs {
  struct Trans {
    State src = 0;
    uint32_t action = 0;
    uint32_t index = 0;  // 1-based rendezvous slot
    State dst = 0;
  };

  uint32_t k = 1;
  uint32_t nstates = 0;
  uint32_t nactions = 0;
  std::vector<Trans> trans;
};

// The rendezvous fragment of a template (broadcast edges are dropped).
Cvrs cvrs_of(const ProcessTemplate& tpl);

using CvrsConfig = std::vector<Rat>;

std::vector<uint32_t> config_support(const CvrsConfig& c);

struct StepTuple {
  std::vector<uint32_t> t;  // one transition id per slot; t[i] must have index i+1
  Rat alpha;                // multiplicity, > 0
};

struct StepResult {
  bool ok = false;
  CvrsConfig cfg;
  std::string error;
};

// Fires the tuple at its multiplicity. Fails (naming the deficient state)
// when some state holds less mass than the step consumes.
StepResult step(const Cvrs& v, const CvrsConfig& cfg, const StepTuple& tup);

struct CvrsTrace {
  CvrsConfig start;
  std::vector<StepTuple> steps;
};

// gamma * trace: scales the start and every multiplicity; gamma > 0.
CvrsTrace scale_trace(const CvrsTrace& tr, const Rat& gamma);
// add + trace: shifts every configuration up by a constant vector.
CvrsTrace shift_trace(const CvrsTrace& tr, const CvrsConfig& add);
// second trace must start where the first ends
CvrsTrace concat_traces(const CvrsTrace& a, const CvrsTrace& b);

// Replays the trace; nullopt if some step is illegal.
std::optional<CvrsConfig> trace_end(const Cvrs& v, const CvrsTrace& tr);

// Least fixed point of forward reachability through full tuples of `sub`
// (transition ids): starts at the support of c, and once every slot of an
// action has a source inside, the destinations of all its inside-source
// transitions join. back() is the mirror image (swap src/dst).
std::vector<uint32_t> forw(const Cvrs& v, const CvrsConfig& c, const std::vector<uint32_t>& sub);
std::vector<uint32_t> back(const Cvrs& v, const CvrsConfig& c, const std::vector<uint32_t>& sub);

// Reachability certificate check: flow equation, per-action slot balance,
// and the support conditions on R' = {t : mu_t > 0}:
//   src(R') within back(c',R'), dst(R') within forw(c,R'),
//   forw(c,R') = back(c',R').
bool check_reach_certificate(const Cvrs& v, const CvrsConfig& c, const CvrsConfig& cp,
                             const std::vector<Rat>& mu);

struct ReachResult {
  bool reachable = false;
  std::vector<Rat> mu;  // certificate when reachable (checks above)
};

// Decides whether some trace leads from c to c': support-maximal solve of the
// scaled flow+balance system, then restriction to forw/back-consistent
// transitions, iterated to a fixed point, with the certificate check on the
// surviving coefficients.
ReachResult cvrs_reachable(const Cvrs& v, const CvrsConfig& c, const CvrsConfig& cp);

}  // namespace pmcp
