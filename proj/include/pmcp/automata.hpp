#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmcp/edgetypes.hpp"
#include "pmcp/template.hpp"
#include "pmcp/unwinding.hpp"

namespace pmcp {

enum class CounterCmd : uint8_t { Skip, Inc, Reset };

std::string_view counter_cmd_name(CounterCmd c);

// One transition of a word automaton. Letters are atom sets packed as masks
// over the owning automaton's atom table, exactly like template labels. The
// counter command only means something inside a BAutomaton; everywhere else
// it stays Skip.
struct AutTransition {
  uint32_t src = 0;
  Letter letter = 0;
  uint32_t dst = 0;
  CounterCmd cc = CounterCmd::Skip;

  auto operator<=>(const AutTransition&) const = default;
};

// Common skeleton: named states over the alphabet of atom subsets.
struct AutomatonBase {
  std::vector<std::string> atoms;
  std::vector<std::string> states;
  std::vector<uint32_t> initial;  // kept sorted and unique by normalize()
  std::vector<AutTransition> transitions;

  uint32_t add_state(std::string name);
  void add_transition(uint32_t src, Letter letter, uint32_t dst,
                      CounterCmd cc = CounterCmd::Skip);
  Letter letter_of(const std::vector<std::string>& names) const;
  std::vector<std::string> letter_names(Letter l) const;

  // Sorts and dedupes initial and transitions. Transitions differing only in
  // their counter command are kept apart.
  void normalize();

  bool operator==(const AutomatonBase&) const = default;
};

// Finite-word automaton; `accepting` lists the final states.
struct Nfw : AutomatonBase {
  std::vector<uint32_t> accepting;
  bool operator==(const Nfw&) const = default;
};

// Buechi automaton over infinite words; a run is accepting when it visits
// `accepting` infinitely often.
struct Nbw : AutomatonBase {
  std::vector<uint32_t> accepting;
  bool operator==(const Nbw&) const = default;
};

// Buechi automaton with a single counter driven by the per-transition
// commands. A run is accepting when it satisfies the Buechi condition and
// the counter stays bounded along it.
struct BAutomaton : AutomatonBase {
  std::vector<uint32_t> accepting;
  bool operator==(const BAutomaton&) const = default;
};

// A run satisfies the pair when visiting `trigger` infinitely often forces
// visiting `goal` infinitely often.
struct StreettPair {
  std::vector<uint32_t> trigger;
  std::vector<uint32_t> goal;
  bool operator==(const StreettPair&) const = default;
};

// A run is accepting when it satisfies every pair.
struct StreettAutomaton : AutomatonBase {
  std::vector<StreettPair> pairs;
  bool operator==(const StreettAutomaton&) const = default;
};

// Empty result means the automaton is well formed: state ids in range,
// letters within the atom table, pair members in range.
std::vector<std::string> validate_automaton(const Nfw& a);
std::vector<std::string> validate_automaton(const Nbw& a);
std::vector<std::string> validate_automaton(const BAutomaton& a);
std::vector<std::string> validate_automaton(const StreettAutomaton& a);

// An ultimately periodic run, as indices into the owning automaton's
// transition table. The cycle is nonempty, starts where the stem ends, and
// returns there.
struct LassoRun {
  std::vector<uint32_t> stem;
  std::vector<uint32_t> cycle;
  bool operator==(const LassoRun&) const = default;
};

// The letters a transition sequence reads.
std::vector<Letter> run_word(const AutomatonBase& a, const std::vector<uint32_t>& transitions);

// Word automaton for the finite executions of the unwound system: one state
// per unwound state plus a single final stop state. Every unwound edge reads
// the label of its source, and each state can instead read its own label and
// halt, so an accepted word is the full label sequence of the states a path
// visits. The empty word is never accepted; a path visits at least one state.
Nfw build_exec_nfw(const UnwoundTemplate& uw);

// Counter automaton for the infinite executions: three copies of the unwound
// state space. Runs start in the free copy, where every step increments the
// counter, and each step may also jump into one of the restricted copies.
// The green copy keeps only edges that survive unboundedly many broadcasts:
// dark rendezvous edges increment, broadcasts reset, light edges cost
// nothing. The local copy keeps only locally-reusable edges and never touches
// the counter. The Buechi set is all states, so acceptance is exactly counter
// boundedness: a run must either commit to the local copy or keep resetting
// via broadcasts in the green copy.
BAutomaton build_exec_bautomaton(const UnwoundTemplate& uw, const EdgeTypeReport& report);

// Language inclusion L(a) subseteq L(spec) over the same atom table, by
// determinizing spec on the fly. On failure, `counterexample` holds a
// shortest word accepted by a but not by spec (possibly the empty word).
struct InclusionResult {
  bool holds = true;
  std::vector<Letter> counterexample;
};
InclusionResult nfw_inclusion(const Nfw& a, const Nfw& spec);

// Synchronous product restricted to its reachable part. Counter commands
// come from b, the Buechi set is lifted from n. Requires b's own Buechi set
// to be trivial (all states), which build_exec_bautomaton guarantees.
BAutomaton b_product_nbw(const BAutomaton& b, const Nbw& n);

// The Streett automaton b_emptiness decides on: states remember the command
// of the transition just taken, one pair lifts the Buechi set, the other
// demands that infinitely many increments force infinitely many resets.
// When `origin` is given, it receives the b-transition index behind each
// Streett transition.
StreettAutomaton b_to_streett(const BAutomaton& b, std::vector<uint32_t>* origin = nullptr);

// nullopt means the language is empty. A returned witness cycle satisfies
// every pair with its full state set.
std::optional<LassoRun> streett_emptiness(const StreettAutomaton& st);

// nullopt means the language is empty. A returned witness cycle visits the
// Buechi set and either never increments or resets at least once, so its
// word is accepted with the counter bounded by the run length.
std::optional<LassoRun> b_emptiness(const BAutomaton& b);

// Membership of the ultimately periodic word stem.cycle^omega; the cycle
// must be nonempty. The returned run reads that word (its own cycle may span
// several turns of the word cycle).
std::optional<LassoRun> b_lasso_run(const BAutomaton& b, const std::vector<Letter>& stem,
                                    const std::vector<Letter>& cycle);
bool b_accepts_lasso(const BAutomaton& b, const std::vector<Letter>& stem,
                     const std::vector<Letter>& cycle);
bool nbw_accepts_lasso(const Nbw& n, const std::vector<Letter>& stem,
                       const std::vector<Letter>& cycle);

// Membership of a finite word.
bool nfw_accepts(const Nfw& a, const std::vector<Letter>& word);

}  // namespace pmcp
