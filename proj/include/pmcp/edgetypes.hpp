#pragma once

#include <cstdint>
#include <vector>

#include "pmcp/rational.hpp"
#include "pmcp/unwinding.hpp"

namespace pmcp {

enum class Shade : uint8_t { None, Light, Dark };

// Classification of the flat edges of an unwinding.
//
// An edge is locally reusable when it can repeat forever after broadcasts
// stop: it lies on a counter cycle of rendezvous steps inside its own
// component. It is green when it can repeat forever on a run that keeps
// broadcasting, i.e. it lies on a counter cycle that wraps the loop of the
// lasso. Green edges split into light (already on a broadcast-free cycle
// built from green edges alone) and dark (the rest). Broadcast edges are
// never light.
struct EdgeTypeReport {
  // Indexed by flat edge id.
  std::vector<bool> locally_reusable;
  std::vector<bool> green;
  std::vector<Shade> shade;

  // Cycle witnesses, indexed by flat edge id; positive exactly on the edges
  // of the matching set. Each multiset of steps balances state flow (and for
  // the green witness, broadcast mass around the loop), so scaling by the
  // common denominator yields an integer firing count realizable as a cycle.
  std::vector<Rat> locr_mu;
  std::vector<Rat> green_mu;
  std::vector<Rat> light_mu;

  // Rounds the green refinement took to stabilize.
  uint32_t green_iterations = 0;
};

// Sorted flat edge ids carrying each flag. Locally reusable edges come from
// one homogeneous flow system per component (all components, including the
// prefix); green edges from a support refinement over a joint circulation
// system spanning the loop components, so prefix edges are never green.
std::vector<uint32_t> locally_reusable_edges(const UnwoundTemplate& uw);
std::vector<uint32_t> green_edges(const UnwoundTemplate& uw);
// `green` must be green_edges of the same unwinding.
std::vector<uint32_t> light_green_edges(const UnwoundTemplate& uw,
                                        const std::vector<uint32_t>& green);

EdgeTypeReport classify(const UnwoundTemplate& uw);

}  // namespace pmcp
