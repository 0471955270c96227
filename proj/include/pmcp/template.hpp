#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pmcp {

// State and action handles are indices into the owning template's tables.
using State = uint32_t;

// A letter is a set of atoms, packed as a bitmask over the template's atom
// table. At most 64 atoms per template.
using Letter = uint64_t;

enum class Kind : uint8_t { R, RB, RBA };

std::string_view kind_name(Kind k);

struct EdgeLabel {
  enum class Type : uint8_t {
    Rendezvous,  // action + index in [1..k]
    Broadcast,   // symmetric broadcast (RB kind only)
    Snd,         // asymmetric broadcast, sender role (RBA kind only)
    Rcv,         // asymmetric broadcast, receiver role (RBA kind only)
  };
  Type type = Type::Broadcast;
  uint32_t action = 0;  // meaningless for Broadcast
  uint32_t index = 0;   // rendezvous position, 1-based; 0 otherwise

  auto operator<=>(const EdgeLabel&) const = default;
};

struct Edge {
  State src = 0;
  EdgeLabel label;
  State dst = 0;

  auto operator<=>(const Edge&) const = default;
};

struct ProcessTemplate {
  Kind kind = Kind::RB;
  uint32_t k = 1;  // rendezvous arity
  std::vector<std::string> atoms;
  std::vector<std::string> states;
  std::vector<std::string> actions;
  std::vector<State> initial;
  std::vector<Letter> labels;  // one mask per state
  std::vector<Edge> edges;

  int state_id(std::string_view name) const;
  int action_id(std::string_view name) const;
  int atom_id(std::string_view name) const;

  State add_state(std::string name, Letter label = 0);
  uint32_t add_action(std::string name);  // reuses an existing entry by name
  uint32_t add_atom(std::string name);

  // Mask with one bit per atom of `names`; all names must exist.
  Letter letter_of(const std::vector<std::string>& names) const;
  std::vector<std::string> letter_names(Letter l) const;

  bool operator==(const ProcessTemplate&) const = default;
};

// A configuration of the n-process instantiation: process i (1-based) is in
// state cfg[i-1].
using Configuration = std::vector<State>;

struct GlobalTransition {
  enum class Type : uint8_t { Broadcast, Rendezvous, AsymBroadcast };
  Type type = Type::Broadcast;
  uint32_t action = 0;    // Rendezvous/AsymBroadcast
  uint32_t sender = 0;    // AsymBroadcast: 1-based id of the b_snd process
  Configuration source;
  Configuration dest;
  // Moves of active processes: (1-based process id, edge taken), ids
  // ascending. Broadcasts list every process; a rendezvous lists the k bound
  // ones (the process bound to index j takes an a_j edge).
  std::vector<std::pair<uint32_t, Edge>> moves;

  bool operator==(const GlobalTransition&) const = default;
};

using ExecutionTrace = std::vector<Letter>;

// Empty result means the template satisfies all kind invariants; otherwise
// each entry names the offending state/edge.
std::vector<std::string> validate_template(const ProcessTemplate& tpl);

// All global transitions from cfg, deterministically ordered: broadcasts
// first, then rendezvous grouped by action, binding tuples lexicographic,
// edge choices in input order.
std::vector<GlobalTransition> successors(const ProcessTemplate& tpl, const Configuration& cfg);

struct ProjectedRun {
  std::vector<Edge> edges;    // edges where the process was active, in order
  ExecutionTrace trace;       // labels of the states it visited (length = edges+1)
};

ProjectedRun project_run(const ProcessTemplate& tpl, const std::vector<GlobalTransition>& run,
                         uint32_t process, State start);

// For each action a with declared arity j < k, adds self-loops labeled
// a_i (j < i <= k) on every state. `declared[a]` = arity of action a; entries
// for broadcast-role actions are ignored.
ProcessTemplate normalize_arity(const ProcessTemplate& tpl, const std::vector<uint32_t>& declared);

// For every state s with a self-loop, adds a fresh non-initial copy s^ with
// the same label, redirects each self-loop (s,sigma,s) to (s,sigma,s^), and
// copies every outgoing edge of s onto s^ (copies of former self-loops point
// back at s). The result has no self-loops and the same execution set.
ProcessTemplate remove_self_loops(const ProcessTemplate& tpl);

}  // namespace pmcp
