#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pmcp/automata.hpp"

namespace pmcp {

enum class LtlOp : uint8_t {
  Atom,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Next,
  Until,
  Eventually,
  Always,
};

struct LtlNode;
using LtlPtr = std::shared_ptr<const LtlNode>;

// Immutable formula tree. Unary operators keep their operand in lhs.
struct LtlNode {
  LtlOp op = LtlOp::True;
  std::string atom;  // Atom nodes only
  LtlPtr lhs, rhs;
};

LtlPtr ltl_atom(std::string name);
LtlPtr ltl_true();
LtlPtr ltl_false();
LtlPtr ltl_not(LtlPtr a);
LtlPtr ltl_and(LtlPtr a, LtlPtr b);
LtlPtr ltl_or(LtlPtr a, LtlPtr b);
LtlPtr ltl_implies(LtlPtr a, LtlPtr b);
LtlPtr ltl_next(LtlPtr a);
LtlPtr ltl_until(LtlPtr a, LtlPtr b);
LtlPtr ltl_eventually(LtlPtr a);
LtlPtr ltl_always(LtlPtr a);

// Grammar, loosest binding first: -> (right associative), |, &, U (right
// associative), then the prefix operators !, X, F, G. Identifiers are runs
// of letters, digits, _, @ and '; the bare words X, F, G, U, true and false
// are reserved, so multi-letter names containing them (like "Xp") are plain
// atoms. Throws std::runtime_error on malformed input.
LtlPtr parse_ltl(const std::string& text);

// Prints with the minimal parentheses the grammar needs to read the same
// tree back.
std::string ltl_to_string(const LtlPtr& f);

// Atom names used by the formula, sorted.
std::vector<std::string> ltl_atoms(const LtlPtr& f);

// Finite-word semantics with a strong next: X fails at the last position and
// an until must discharge before the word ends. The word must be nonempty;
// letters are masks over `atoms`, which must cover the formula.
bool ltl_eval_finite(const LtlPtr& f, const std::vector<std::string>& atoms,
                     const std::vector<Letter>& word);

// Semantics on the infinite word stem.cycle^omega; the cycle must be
// nonempty. Until is evaluated as a least fixpoint over the looped
// positions, so the result is exact.
bool ltl_eval_lasso(const LtlPtr& f, const std::vector<std::string>& atoms,
                    const std::vector<Letter>& stem, const std::vector<Letter>& cycle);

// Buechi automaton with L(A) = the infinite words over `atoms` satisfying f,
// built from assignments to the formula's atoms, next- and until-nodes and
// degeneralized with a round-robin counter over the untils. Atoms outside
// the formula are unconstrained. Throws ResourceLimitError when the tableau
// or the widened letters would blow up.
Nbw ltl_to_nbw(const LtlPtr& f, const std::vector<std::string>& atoms);

// Finite-word automaton for the strong-next semantics above: the tableau
// plus one accepting sink entered from states where the word may end. The
// empty word is never accepted.
Nfw ltlf_to_nfw(const LtlPtr& f, const std::vector<std::string>& atoms);

}  // namespace pmcp
