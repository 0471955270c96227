#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pmcp/rational.hpp"

namespace pmcp {

// Constraint system in standard form: find x >= 0 (componentwise, implicit)
// satisfying every row a.x (=|>=) b. Exact rational arithmetic throughout.
struct LinearSystem {
  enum class Rel : uint8_t { Eq, Ge };
  struct Row {
    std::vector<Rat> a;  // one coefficient per variable
    Rel rel = Rel::Eq;
    Rat b;
  };

  std::vector<std::string> vars;
  std::vector<Row> rows;

  size_t add_var(std::string name);
  // Missing trailing coefficients are treated as zero.
  void add_row(std::vector<Rat> a, Rel rel, Rat b);
  // Evaluates a.x for a (possibly short) coefficient row.
  static Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& x);
  bool satisfied_by(const std::vector<Rat>& x) const;
};

struct Solution {
  std::vector<Rat> value;       // per variable, all >= 0
  std::vector<size_t> support;  // indices of variables with positive value

  static Solution zero(size_t nvars);
  void recompute_support();
};

// Infeasibility certificate: one multiplier per row, free for Eq rows and
// >= 0 for Ge rows, with sum_r y_r * a_r <= 0 componentwise and
// sum_r y_r * b_r > 0.
struct FarkasCertificate {
  std::vector<Rat> y;
  bool verify(const LinearSystem& sys) const;
};

struct LpResult {
  bool feasible = false;
  Solution sol;            // meaningful iff feasible
  FarkasCertificate cert;  // meaningful iff infeasible
};

// Two-phase exact simplex (phase one only; no objective), Bland's rule.
LpResult lp_feasible(const LinearSystem& sys);

// Sums, over each probe variable v, a solution of sys + {x_v >= 1} when one
// exists. The support of the sum is the unique maximal support over such
// solutions. Requires every Eq row to have rhs 0 and every Ge row a rhs
// >= 0, so that solutions are closed under addition.
Solution support_maximal_solution(const LinearSystem& sys, const std::vector<size_t>& probes,
                                  bool parallel = true);

}  // namespace pmcp
