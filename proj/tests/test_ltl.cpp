#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmcp/automata.hpp"
#include "pmcp/ltl.hpp"
#include "pmcp/unwinding.hpp"
#include "testutil.hpp"

using namespace pmcp;
using testutil::Rng;

static const std::vector<std::string> PQ = {"p", "q"};
static constexpr Letter L0 = 0, LP = 1, LQ = 2, LPQ = 3;

// battery shared with the automaton comparisons; covers every operator,
// nesting of untils, and both propositional corner formulas
static const char* kBattery[] = {
    "p",         "q",           "!p",
    "p | q",     "p & q",       "p -> q",
    "X p",       "X X q",       "p U q",
    "G p",       "F p",         "G (p -> F q)",
    "p U (q U p)", "(X p) U q", "G F p",
    "F G q",     "!(p U q)",    "(p | q) U (p & q)",
    "G p | F q", "X (p U q)",   "true",
    "false",     "(p -> q) -> q",
};

static void each_word(size_t maxlen, const std::function<void(const std::vector<Letter>&)>& f) {
  std::vector<Letter> w;
  std::function<void(size_t)> rec = [&](size_t budget) {
    f(w);
    if (budget == 0) return;
    for (Letter l = 0; l < 4; ++l) {
      w.push_back(l);
      rec(budget - 1);
      w.pop_back();
    }
  };
  rec(maxlen);
}

// every (stem, cycle) split with |stem| + |cycle| <= maxlen and a nonempty cycle
static void each_lasso(
    size_t maxlen,
    const std::function<void(const std::vector<Letter>&, const std::vector<Letter>&)>& f) {
  each_word(maxlen, [&](const std::vector<Letter>& w) {
    for (size_t cut = 0; cut < w.size(); ++cut)
      f(std::vector<Letter>(w.begin(), w.begin() + cut),
        std::vector<Letter>(w.begin() + cut, w.end()));
  });
}

TEST_CASE("parser builds the expected shapes") {
  LtlPtr f = parse_ltl("p U q -> G r | !s & X t");
  REQUIRE(f->op == LtlOp::Implies);
  CHECK(f->lhs->op == LtlOp::Until);
  REQUIRE(f->rhs->op == LtlOp::Or);
  CHECK(f->rhs->lhs->op == LtlOp::Always);
  REQUIRE(f->rhs->rhs->op == LtlOp::And);
  CHECK(f->rhs->rhs->lhs->op == LtlOp::Not);
  CHECK(f->rhs->rhs->rhs->op == LtlOp::Next);

  // U is right associative, & folds left
  LtlPtr u = parse_ltl("p U q U r");
  CHECK(u->lhs->op == LtlOp::Atom);
  CHECK(u->rhs->op == LtlOp::Until);
  LtlPtr a = parse_ltl("p & q & r");
  CHECK(a->lhs->op == LtlOp::And);
  CHECK(a->rhs->op == LtlOp::Atom);

  // prefix letters glued to a name are part of the name
  CHECK(parse_ltl("Xp")->op == LtlOp::Atom);
  CHECK(parse_ltl("Xp")->atom == "Xp");
  CHECK(parse_ltl("a'1@x_")->atom == "a'1@x_");

  for (const char* bad : {"", "p U", "(p", "p q", "p &", "U p", "p -", ")", "p # q"})
    CHECK_THROWS_AS(parse_ltl(bad), std::runtime_error);
}

TEST_CASE("printing is a fixpoint of parsing") {
  for (const char* canon :
       {"p U q -> G r | !s & X t", "p U q U r", "(p U q) U r", "p & q | r", "p -> q -> r",
        "(p -> q) -> q", "!(p U q)", "X (p & q)", "G (p -> F q)", "!p", "X p",
        "p & q & r", "p | (q -> r)", "F G q", "true U false"}) {
    CHECK(ltl_to_string(parse_ltl(canon)) == canon);
  }
  for (const char* s : kBattery) {
    std::string printed = ltl_to_string(parse_ltl(s));
    CHECK(ltl_to_string(parse_ltl(printed)) == printed);
  }
}

TEST_CASE("ltl_atoms collects names") {
  CHECK(ltl_atoms(parse_ltl("G (a -> F b') | c@1 U a")) ==
        std::vector<std::string>{"a", "b'", "c@1"});
  CHECK(ltl_atoms(parse_ltl("true U false")).empty());
}

TEST_CASE("hand-checked evaluations") {
  auto lasso = [](const char* s, std::vector<Letter> u, std::vector<Letter> v) {
    return ltl_eval_lasso(parse_ltl(s), PQ, u, v);
  };
  CHECK(lasso("G F p", {}, {LP, L0}));
  CHECK_FALSE(lasso("G F p", {LP}, {L0}));
  CHECK(lasso("F G q", {}, {LQ, LQ}));
  CHECK_FALSE(lasso("F G q", {}, {LQ, L0}));
  CHECK(lasso("p U q", {LP, LP}, {LQ}));
  CHECK_FALSE(lasso("p U q", {}, {LP}));
  CHECK(lasso("X X q", {LP, L0}, {LQ}));
  CHECK(lasso("G p", {}, {LP, LPQ}));
  CHECK_FALSE(lasso("G p", {LQ}, {LP}));

  auto fin = [](const char* s, std::vector<Letter> w) {
    return ltl_eval_finite(parse_ltl(s), PQ, w);
  };
  CHECK(fin("G p", {LP, LPQ}));
  CHECK_FALSE(fin("G p", {LP, LQ}));
  CHECK(fin("F q", {LP, LQ}));
  CHECK_FALSE(fin("F q", {LP, LP}));
  CHECK_FALSE(fin("X p", {LP}));  // strong next dies at the last position
  CHECK(fin("X p", {LQ, LP}));
  CHECK(fin("p U q", {LP, LP, LQ}));
  CHECK_FALSE(fin("p U q", {LP, LP, LP}));  // must discharge before the end
  CHECK(fin("p -> q", {L0}));
  CHECK_FALSE(fin("p -> q", {LP}));
  CHECK(fin("p -> q", {LPQ}));

  CHECK_THROWS_AS(fin("p", {}), std::invalid_argument);
  CHECK_THROWS_AS(lasso("p", {LP}, {}), std::invalid_argument);
  CHECK_THROWS_AS(fin("zap", {LP}), std::invalid_argument);
}

TEST_CASE("battery agrees with the Buechi construction on all short lassos") {
  for (const char* s : kBattery) {
    LtlPtr f = parse_ltl(s);
    Nbw a = ltl_to_nbw(f, PQ);
    CHECK(validate_automaton(a).empty());
    each_lasso(4, [&](const std::vector<Letter>& u, const std::vector<Letter>& v) {
      bool want = ltl_eval_lasso(f, PQ, u, v);
      CHECK_MESSAGE(nbw_accepts_lasso(a, u, v) == want, s);
    });
  }
}

TEST_CASE("battery agrees with the finite-word construction on all short words") {
  for (const char* s : kBattery) {
    LtlPtr f = parse_ltl(s);
    Nfw a = ltlf_to_nfw(f, PQ);
    CHECK(validate_automaton(a).empty());
    CHECK_FALSE(nfw_accepts(a, {}));
    each_word(4, [&](const std::vector<Letter>& w) {
      if (w.empty()) return;
      bool want = ltl_eval_finite(f, PQ, w);
      CHECK_MESSAGE(nfw_accepts(a, w) == want, s);
    });
  }
}

TEST_CASE("lasso evaluation is stable under unrolling") {
  for (const char* s : kBattery) {
    LtlPtr f = parse_ltl(s);
    each_lasso(3, [&](const std::vector<Letter>& u, const std::vector<Letter>& v) {
      bool want = ltl_eval_lasso(f, PQ, u, v);
      std::vector<Letter> uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      std::vector<Letter> vv = v;
      vv.insert(vv.end(), v.begin(), v.end());
      CHECK(ltl_eval_lasso(f, PQ, uv, v) == want);
      CHECK(ltl_eval_lasso(f, PQ, u, vv) == want);
    });
  }
}

static LtlPtr random_formula(Rng& rng, int depth) {
  if (depth == 0 || rng.chance(1, 4)) {
    switch (rng.below(4)) {
      case 0:
        return ltl_atom("p");
      case 1:
        return ltl_atom("q");
      case 2:
        return ltl_true();
      default:
        return ltl_false();
    }
  }
  switch (rng.below(8)) {
    case 0:
      return ltl_not(random_formula(rng, depth - 1));
    case 1:
      return ltl_and(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 2:
      return ltl_or(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 3:
      return ltl_implies(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 4:
      return ltl_next(random_formula(rng, depth - 1));
    case 5:
      return ltl_until(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 6:
      return ltl_eventually(random_formula(rng, depth - 1));
    default:
      return ltl_always(random_formula(rng, depth - 1));
  }
}

TEST_CASE("random formulas agree with both constructions") {
  Rng rng(0x17f1);
  for (int iter = 0; iter < 60; ++iter) {
    LtlPtr f = random_formula(rng, 3);
    std::string printed = ltl_to_string(f);
    CHECK(ltl_to_string(parse_ltl(printed)) == printed);

    Nbw nbw = ltl_to_nbw(f, PQ);
    Nfw nfw = ltlf_to_nfw(f, PQ);
    for (int rep = 0; rep < 30; ++rep) {
      std::vector<Letter> u, v, w;
      for (size_t i = rng.below(4); i-- > 0;) u.push_back(rng.below(4));
      for (size_t i = 1 + rng.below(3); i-- > 0;) v.push_back(rng.below(4));
      for (size_t i = 1 + rng.below(5); i-- > 0;) w.push_back(rng.below(4));
      CHECK(nbw_accepts_lasso(nbw, u, v) == ltl_eval_lasso(f, PQ, u, v));
      CHECK(nfw_accepts(nfw, w) == ltl_eval_finite(f, PQ, w));
    }
  }
}

TEST_CASE("atoms outside the formula are unconstrained") {
  std::vector<std::string> table = {"p", "z"};
  Nbw a = ltl_to_nbw(parse_ltl("G p"), table);
  Letter zp = 3, ponly = 1, zonly = 2;
  CHECK(nbw_accepts_lasso(a, {}, {ponly}));
  CHECK(nbw_accepts_lasso(a, {zp}, {ponly, zp}));
  CHECK_FALSE(nbw_accepts_lasso(a, {}, {zonly}));

  Nfw n = ltlf_to_nfw(parse_ltl("F p"), table);
  CHECK(nfw_accepts(n, {zonly, zp}));
  CHECK_FALSE(nfw_accepts(n, {zonly, zonly}));

  CHECK_THROWS_AS(ltl_to_nbw(parse_ltl("G zap"), table), std::invalid_argument);
}

TEST_CASE("construction is deterministic and bounded") {
  Nbw a = ltl_to_nbw(parse_ltl("G (p -> F q)"), PQ);
  Nbw b = ltl_to_nbw(parse_ltl("G (p -> F q)"), PQ);
  CHECK(a == b);

  LtlPtr deep = ltl_atom("p");
  for (int i = 0; i < 21; ++i) deep = ltl_next(deep);
  CHECK_THROWS_AS(ltl_to_nbw(deep, PQ), ResourceLimitError);
  CHECK_THROWS_AS(ltlf_to_nfw(deep, PQ), ResourceLimitError);
  // the evaluators have no such limit
  CHECK_FALSE(ltl_eval_finite(deep, PQ, {LP}));
  CHECK(ltl_eval_lasso(deep, PQ, {}, {LP}));
}
