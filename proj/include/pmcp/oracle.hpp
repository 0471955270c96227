#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pmcp/template.hpp"
#include "pmcp/unwinding.hpp"

namespace pmcp {

// Brute-force reference semantics for small instantiations. Everything here
// is exhaustive within its budget: a positive answer comes with a concrete
// witness, a negative answer only means "not found within the budget".

// A configuration with process identities forgotten: counts[s] processes sit
// in state s. Permutation symmetry collapses the identity space to these.
struct CounterConfig {
  std::vector<uint32_t> counts;  // indexed by template state

  uint32_t total() const;
  auto operator<=>(const CounterConfig&) const = default;
};

CounterConfig count_config(const ProcessTemplate& tpl, const Configuration& cfg);

// All counter configurations of the n-process system reachable within
// `depth` global steps, sorted. R and RB kinds only. The searches in this
// header expand BFS layers across threads when `parallel` is set; results
// and witnesses are independent of the flag because each layer is merged
// and tie-broken lexicographically before the next one starts.
std::vector<CounterConfig> enumerate_reachable(const ProcessTemplate& tpl, uint32_t n,
                                               uint32_t depth, bool parallel = true);

// Every execution of length <= maxlen that some process of the n-process
// system can produce: the labels of the states the process itself visits,
// starting with its initial label. Sorted and deduplicated; all words are
// nonempty. Explores identities but collapses the other processes to counts,
// so the frontier stays polynomial in n.
std::vector<ExecutionTrace> executions_upto(const ProcessTemplate& tpl, uint32_t n,
                                            size_t maxlen);

// One concrete run: the start configuration and the transitions taken, each
// consistent with successors() of the configuration it fires from.
struct OracleRun {
  Configuration start;
  std::vector<GlobalTransition> steps;

  Configuration end() const { return steps.empty() ? start : steps.back().dest; }
  bool operator==(const OracleRun&) const = default;
};

struct PseudoCycleQuery {
  uint32_t edge = 0;            // flat edge the cycle must use
  uint32_t broadcasts = 0;      // exact broadcast count: 0 or the period
  uint32_t max_processes = 8;   // processes tried, smallest first
  bool legal_only = true;       // starts keep all processes in one component
};

// Searches the flat system for a nonempty run that returns to its start
// counts (processes may trade places) and takes the target edge, with
// exactly the requested number of broadcasts. Zero-broadcast searches try
// every component as the start; period-many searches start where the loop
// begins, so the broadcasts land back there. Legality of a start is
// preserved automatically: rendezvous edges stay inside a component and a
// broadcast moves everyone to the next one.
std::optional<OracleRun> pseudo_cycle_search(const UnwoundTemplate& uw,
                                             const PseudoCycleQuery& q, bool parallel = true);

// Searches the n-process system for a run with exactly `broadcasts`
// broadcast steps ending with at least one process in `target`. R/RB only.
std::optional<OracleRun> load_state_search(const ProcessTemplate& tpl, uint32_t n,
                                           uint32_t broadcasts, State target,
                                           bool parallel = true);

// Interleaves runs with equal broadcast counts into one run of the combined
// system: between consecutive broadcasts the rendezvous segments play out
// round-robin, then everyone broadcasts at once. Process ids of run i are
// shifted up by the sizes of the runs before it. If n exceeds the sum of the
// run sizes, the spare processes start in the template's first initial state
// and join each broadcast on the first edge available to them (throws
// std::invalid_argument if one of them has none, or if the broadcast counts
// disagree). n = 0 means exactly the sum.
OracleRun compose_runs(const ProcessTemplate& tpl, const std::vector<OracleRun>& runs,
                       uint32_t n = 0);

// The sub-run induced by processes [first, first+count), 1-based: steps none
// of them take part in are dropped, the rest keep only their moves, with ids
// shifted down to 1..count. Returns nullopt if some rendezvous mixes group
// and non-group processes (then the group's view is not a run on its own).
std::optional<OracleRun> restrict_run(const OracleRun& run, uint32_t first, uint32_t count);

// A finite state-labeled transition system, for checking translations that
// promise bisimilar behaviour.
struct Lts {
  std::vector<Letter> labels;             // one mask per state
  std::vector<uint32_t> initial;
  std::vector<std::vector<uint32_t>> succ;  // adjacency, indexed by state
};

// Checks that `relation` is a bisimulation between a and b covering the
// initial states: related states carry equal labels, every move of one side
// is matched by the other within the relation, and each initial state of
// either side is related to an initial state of the other.
bool check_bisimulation(const Lts& a, const Lts& b,
                        const std::vector<std::pair<uint32_t, uint32_t>>& relation);

}  // namespace pmcp
