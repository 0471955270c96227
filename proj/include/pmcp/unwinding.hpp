#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmcp/template.hpp"

namespace pmcp {

// Thrown when a construction exceeds a configured size cap.
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One component of the unwinding: the part of the base template that
// processes can populate after a fixed number of broadcasts.
struct Component {
  uint32_t index = 0;
  std::vector<State> states;   // sorted base-state ids
  std::vector<State> initial;  // seed: broadcast successors of the previous component
  std::vector<Edge> edges;     // rendezvous edges, in base edge order
  bool operator==(const Component&) const = default;
};

// Broadcast edge between components, endpoints in base-state ids.
struct CrossEdge {
  uint32_t from_comp = 0;
  State src = 0;
  State dst = 0;
  uint32_t to_comp = 0;
  auto operator<=>(const CrossEdge&) const = default;
};

struct UnwoundTemplate {
  ProcessTemplate base;
  std::vector<Component> components;
  uint32_t prefix = 0;  // components before the loop starts
  uint32_t period = 1;  // loop length; prefix + period == components.size()
  std::vector<CrossEdge> cross;

  // The unwinding flattened into an ordinary template: states are
  // (base state, component) pairs, edges are the per-component rendezvous
  // edges plus the cross broadcasts. Instantiate it like any template.
  ProcessTemplate flat;
  std::vector<uint32_t> state_component;  // per flat state
  std::vector<State> state_base;          // per flat state
  std::vector<uint32_t> edge_component;   // per flat edge (cross: source side)
  std::vector<uint32_t> comp_offset;      // flat id of each component's first state

  uint32_t ncomponents() const { return static_cast<uint32_t>(components.size()); }
  uint32_t next_component(uint32_t c) const {
    return c + 1 < ncomponents() ? c + 1 : prefix;
  }
  // Flat id of (base_state, comp), or -1 if the state is not in the component.
  int flat_state(uint32_t comp, State base_state) const;

  bool operator==(const UnwoundTemplate&) const = default;
};

// Component index reached after the given number of broadcasts.
uint32_t comp_index(const UnwoundTemplate& uw, uint64_t broadcasts);

// Least fixed point: starting from the seed, repeatedly take any rendezvous
// edge whose source is already in the set and whose action has, for every
// other position, some edge leaving the set; destinations join the set.
// The seed may be unsorted and contain duplicates.
Component saturate(const ProcessTemplate& base, std::vector<State> seed);

// Builds the lasso of components and the flattened template. Accepts R and
// RB kinds. max_components = 0 reads PMCP_MAX_COMPONENTS (default 256);
// exceeding the cap throws ResourceLimitError.
UnwoundTemplate build_unwinding(const ProcessTemplate& tpl, uint32_t max_components = 0);

// Runs of (flat)^n project onto runs of base^n and back: wind drops the
// component coordinate, unwind reattaches it from the running broadcast
// count. unwind throws std::invalid_argument if the input is not a run of
// the base system.
std::vector<GlobalTransition> wind(const UnwoundTemplate& uw,
                                   const std::vector<GlobalTransition>& run);
std::vector<GlobalTransition> unwind(const UnwoundTemplate& uw,
                                     const std::vector<GlobalTransition>& run);

std::string unwinding_to_dot(const UnwoundTemplate& uw);

}  // namespace pmcp
