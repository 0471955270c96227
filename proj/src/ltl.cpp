#include "pmcp/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <tuple>

#include "pmcp/unwinding.hpp"

namespace pmcp {

static LtlPtr mk(LtlOp op, LtlPtr l = nullptr, LtlPtr r = nullptr, std::string atom = {}) {
  auto n = std::make_shared<LtlNode>();
  n->op = op;
  n->atom = std::move(atom);
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

LtlPtr ltl_atom(std::string name) { return mk(LtlOp::Atom, nullptr, nullptr, std::move(name)); }
LtlPtr ltl_true() { return mk(LtlOp::True); }
LtlPtr ltl_false() { return mk(LtlOp::False); }
LtlPtr ltl_not(LtlPtr a) { return mk(LtlOp::Not, std::move(a)); }
LtlPtr ltl_and(LtlPtr a, LtlPtr b) { return mk(LtlOp::And, std::move(a), std::move(b)); }
LtlPtr ltl_or(LtlPtr a, LtlPtr b) { return mk(LtlOp::Or, std::move(a), std::move(b)); }
LtlPtr ltl_implies(LtlPtr a, LtlPtr b) { return mk(LtlOp::Implies, std::move(a), std::move(b)); }
LtlPtr ltl_next(LtlPtr a) { return mk(LtlOp::Next, std::move(a)); }
LtlPtr ltl_until(LtlPtr a, LtlPtr b) { return mk(LtlOp::Until, std::move(a), std::move(b)); }
LtlPtr ltl_eventually(LtlPtr a) { return mk(LtlOp::Eventually, std::move(a)); }
LtlPtr ltl_always(LtlPtr a) { return mk(LtlOp::Always, std::move(a)); }

namespace {

enum class Tk { Ident, KTrue, KFalse, Not, And, Or, Implies, Next, Ev, Al, Until, LPar, RPar, End };

struct Token {
  Tk k;
  std::string text;
  size_t pos;
};

struct Lexer {
  const std::string& s;
  size_t i = 0;
  explicit Lexer(const std::string& str) : s(str) {}

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@' || c == '\'';
  }

  Token next() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t at = i;
    if (i == s.size()) return {Tk::End, "", at};
    char c = s[i];
    if (c == '(') return ++i, Token{Tk::LPar, "(", at};
    if (c == ')') return ++i, Token{Tk::RPar, ")", at};
    if (c == '!') return ++i, Token{Tk::Not, "!", at};
    if (c == '&') return ++i, Token{Tk::And, "&", at};
    if (c == '|') return ++i, Token{Tk::Or, "|", at};
    if (c == '-') {
      if (i + 1 < s.size() && s[i + 1] == '>') return i += 2, Token{Tk::Implies, "->", at};
      throw std::runtime_error("ltl: stray '-' at position " + std::to_string(at));
    }
    if (!ident_char(c))
      throw std::runtime_error("ltl: unexpected character '" + std::string(1, c) +
                               "' at position " + std::to_string(at));
    size_t j = i;
    while (j < s.size() && ident_char(s[j])) ++j;
    std::string w = s.substr(i, j - i);
    i = j;
    if (w == "true") return {Tk::KTrue, w, at};
    if (w == "false") return {Tk::KFalse, w, at};
    if (w == "X") return {Tk::Next, w, at};
    if (w == "F") return {Tk::Ev, w, at};
    if (w == "G") return {Tk::Al, w, at};
    if (w == "U") return {Tk::Until, w, at};
    return {Tk::Ident, w, at};
  }
};

struct Parser {
  Lexer lex;
  Token cur;
  explicit Parser(const std::string& s) : lex(s), cur(lex.next()) {}
  void bump() { cur = lex.next(); }
  [[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error("ltl: expected " + what + " at position " + std::to_string(cur.pos));
  }

  LtlPtr implies() {
    LtlPtr l = orx();
    if (cur.k != Tk::Implies) return l;
    bump();
    return ltl_implies(std::move(l), implies());
  }
  LtlPtr orx() {
    LtlPtr l = andx();
    while (cur.k == Tk::Or) bump(), l = ltl_or(std::move(l), andx());
    return l;
  }
  LtlPtr andx() {
    LtlPtr l = until();
    while (cur.k == Tk::And) bump(), l = ltl_and(std::move(l), until());
    return l;
  }
  LtlPtr until() {
    LtlPtr l = unary();
    if (cur.k != Tk::Until) return l;
    bump();
    return ltl_until(std::move(l), until());
  }
  LtlPtr unary() {
    switch (cur.k) {
      case Tk::Not:
        return bump(), ltl_not(unary());
      case Tk::Next:
        return bump(), ltl_next(unary());
      case Tk::Ev:
        return bump(), ltl_eventually(unary());
      case Tk::Al:
        return bump(), ltl_always(unary());
      default:
        return primary();
    }
  }
  LtlPtr primary() {
    switch (cur.k) {
      case Tk::KTrue:
        return bump(), ltl_true();
      case Tk::KFalse:
        return bump(), ltl_false();
      case Tk::Ident: {
        LtlPtr a = ltl_atom(cur.text);
        bump();
        return a;
      }
      case Tk::LPar: {
        bump();
        LtlPtr f = implies();
        if (cur.k != Tk::RPar) fail("')'");
        bump();
        return f;
      }
      default:
        fail("a formula");
    }
  }
};

int prec_of(LtlOp op) {
  switch (op) {
    case LtlOp::Implies:
      return 1;
    case LtlOp::Or:
      return 2;
    case LtlOp::And:
      return 3;
    case LtlOp::Until:
      return 4;
    case LtlOp::Not:
    case LtlOp::Next:
    case LtlOp::Eventually:
    case LtlOp::Always:
      return 5;
    default:
      return 6;
  }
}

void print(const LtlPtr& f, int min_prec, std::string& out) {
  bool paren = prec_of(f->op) < min_prec;
  if (paren) out += '(';
  switch (f->op) {
    case LtlOp::Atom:
      out += f->atom;
      break;
    case LtlOp::True:
      out += "true";
      break;
    case LtlOp::False:
      out += "false";
      break;
    case LtlOp::Not:
      out += '!';
      print(f->lhs, 5, out);
      break;
    case LtlOp::Next:
      out += "X ";
      print(f->lhs, 5, out);
      break;
    case LtlOp::Eventually:
      out += "F ";
      print(f->lhs, 5, out);
      break;
    case LtlOp::Always:
      out += "G ";
      print(f->lhs, 5, out);
      break;
    case LtlOp::And:
      print(f->lhs, 3, out);
      out += " & ";
      print(f->rhs, 4, out);
      break;
    case LtlOp::Or:
      print(f->lhs, 2, out);
      out += " | ";
      print(f->rhs, 3, out);
      break;
    case LtlOp::Until:
      print(f->lhs, 5, out);
      out += " U ";
      print(f->rhs, 4, out);
      break;
    case LtlOp::Implies:
      print(f->lhs, 2, out);
      out += " -> ";
      print(f->rhs, 1, out);
      break;
  }
  if (paren) out += ')';
}

// Rewrites ->, F and G away so only Atom, True, False, Not, And, Or, Next
// and Until remain.
LtlPtr desugar(const LtlPtr& f) {
  switch (f->op) {
    case LtlOp::Implies:
      return ltl_or(ltl_not(desugar(f->lhs)), desugar(f->rhs));
    case LtlOp::Eventually:
      return ltl_until(ltl_true(), desugar(f->lhs));
    case LtlOp::Always:
      return ltl_not(ltl_until(ltl_true(), ltl_not(desugar(f->lhs))));
    case LtlOp::Not:
      return ltl_not(desugar(f->lhs));
    case LtlOp::And:
      return ltl_and(desugar(f->lhs), desugar(f->rhs));
    case LtlOp::Or:
      return ltl_or(desugar(f->lhs), desugar(f->rhs));
    case LtlOp::Next:
      return ltl_next(desugar(f->lhs));
    case LtlOp::Until:
      return ltl_until(desugar(f->lhs), desugar(f->rhs));
    default:
      return f;
  }
}

// Structurally deduplicated subformula table of a desugared formula, in
// bottom-up order. Atoms, next- and until-nodes carry a free bit; boolean
// nodes derive their value from their children.
struct NodeTab {
  struct N {
    LtlOp op;
    int bit = -1;   // free-bit index, or -1 for derived nodes
    int atom = -1;  // alphabet position of an Atom
    int l = -1, r = -1;
  };
  std::vector<N> nodes;
  std::map<std::tuple<int, int, int, int>, int> memo;
  std::vector<int> untils;
  int nbits = 0;
  int root = -1;
};

int intern(NodeTab& t, const LtlPtr& f, const std::vector<std::string>& atoms) {
  int l = f->lhs ? intern(t, f->lhs, atoms) : -1;
  int r = f->rhs ? intern(t, f->rhs, atoms) : -1;
  int ap = -1;
  if (f->op == LtlOp::Atom) {
    auto it = std::find(atoms.begin(), atoms.end(), f->atom);
    if (it == atoms.end())
      throw std::invalid_argument("ltl: atom \"" + f->atom + "\" is not in the table");
    ap = static_cast<int>(it - atoms.begin());
  }
  auto key = std::make_tuple(static_cast<int>(f->op), ap, l, r);
  auto it = t.memo.find(key);
  if (it != t.memo.end()) return it->second;
  NodeTab::N n{f->op, -1, ap, l, r};
  if (f->op == LtlOp::Atom || f->op == LtlOp::Next || f->op == LtlOp::Until) n.bit = t.nbits++;
  int id = static_cast<int>(t.nodes.size());
  if (f->op == LtlOp::Until) t.untils.push_back(id);
  t.nodes.push_back(n);
  t.memo[key] = id;
  return id;
}

NodeTab make_tab(const LtlPtr& f, const std::vector<std::string>& atoms) {
  if (atoms.size() > 64) throw std::invalid_argument("ltl: more than 64 atoms");
  NodeTab t;
  t.root = intern(t, desugar(f), atoms);
  return t;
}

// Truth value of every node under one assignment of the free bits.
std::vector<char> eval_nodes(const NodeTab& t, uint32_t bits) {
  std::vector<char> v(t.nodes.size());
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    const NodeTab::N& n = t.nodes[i];
    switch (n.op) {
      case LtlOp::Atom:
      case LtlOp::Next:
      case LtlOp::Until:
        v[i] = bits >> n.bit & 1;
        break;
      case LtlOp::True:
        v[i] = 1;
        break;
      case LtlOp::Not:
        v[i] = !v[n.l];
        break;
      case LtlOp::And:
        v[i] = v[n.l] && v[n.r];
        break;
      case LtlOp::Or:
        v[i] = v[n.l] || v[n.r];
        break;
      default:
        v[i] = 0;
    }
  }
  return v;
}

// The tableau: consistent assignments with their node values, the step
// relation given by the next- and until-expansions, and the letters each
// state reads (formula atoms pinned, the rest widened later).
struct Tableau {
  NodeTab tab;
  std::vector<std::vector<char>> val;
  std::vector<char> init, terminal;
  std::vector<std::vector<char>> step;
  std::vector<Letter> base;
  std::vector<int> wild;  // alphabet positions the formula never mentions
};

Tableau build_tableau(const LtlPtr& f, const std::vector<std::string>& atoms) {
  Tableau T;
  T.tab = make_tab(f, atoms);
  const NodeTab& t = T.tab;
  if (t.nbits > 20) throw ResourceLimitError("ltl: formula needs too many tableau bits");

  for (uint32_t bits = 0; bits < (uint32_t{1} << t.nbits); ++bits) {
    std::vector<char> v = eval_nodes(t, bits);
    bool ok = true;
    for (int u : t.untils) {
      const NodeTab::N& n = t.nodes[u];
      if (v[n.r] && !v[u]) ok = false;             // satisfied now, so it must hold
      if (v[u] && !v[n.r] && !v[n.l]) ok = false;  // pending needs the left side
    }
    if (ok) T.val.push_back(std::move(v));
  }
  if (T.val.size() > 2048) throw ResourceLimitError("ltl: tableau has too many states");

  size_t ns = T.val.size();
  std::vector<char> used(atoms.size(), 0);
  for (const NodeTab::N& n : t.nodes)
    if (n.op == LtlOp::Atom) used[n.atom] = 1;
  for (size_t a = 0; a < atoms.size(); ++a)
    if (!used[a]) T.wild.push_back(static_cast<int>(a));

  T.init.resize(ns);
  T.terminal.resize(ns);
  T.base.resize(ns);
  for (size_t s = 0; s < ns; ++s) {
    const std::vector<char>& v = T.val[s];
    T.init[s] = v[t.root];
    bool term = true;
    for (size_t i = 0; i < t.nodes.size(); ++i) {
      if (t.nodes[i].op == LtlOp::Next && v[i]) term = false;
      if (t.nodes[i].op == LtlOp::Until && v[i] != v[t.nodes[i].r]) term = false;
    }
    T.terminal[s] = term;
    Letter l = 0;
    for (const NodeTab::N& n : t.nodes)
      if (n.op == LtlOp::Atom && v[&n - t.nodes.data()]) l |= Letter{1} << n.atom;
    T.base[s] = l;
  }

  T.step.assign(ns, std::vector<char>(ns, 1));
  for (size_t s = 0; s < ns; ++s)
    for (size_t d = 0; d < ns; ++d) {
      for (size_t i = 0; i < t.nodes.size() && T.step[s][d]; ++i) {
        const NodeTab::N& n = t.nodes[i];
        if (n.op == LtlOp::Next && T.val[s][i] != T.val[d][n.l]) T.step[s][d] = 0;
        if (n.op == LtlOp::Until) {
          char want = T.val[s][n.r] || (T.val[s][n.l] && T.val[d][i]);
          if (T.val[s][i] != want) T.step[s][d] = 0;
        }
      }
    }
  return T;
}

// All letters a state reads: its pinned atom bits joined with every choice
// of the unmentioned atoms.
std::vector<Letter> widen(const Tableau& T, size_t s) {
  std::vector<Letter> out;
  out.reserve(size_t{1} << T.wild.size());
  for (uint64_t w = 0; w < (uint64_t{1} << T.wild.size()); ++w) {
    Letter l = T.base[s];
    for (size_t b = 0; b < T.wild.size(); ++b)
      if (w >> b & 1) l |= Letter{1} << T.wild[b];
    out.push_back(l);
  }
  return out;
}

void guard_letters(const Tableau& T, uint64_t pair_count, uint64_t copies) {
  if (T.wild.size() > 16) throw ResourceLimitError("ltl: too many unconstrained atoms");
  uint64_t total = pair_count * copies << T.wild.size();
  if (total > (uint64_t{1} << 22)) throw ResourceLimitError("ltl: automaton would be too large");
}

}  // namespace

LtlPtr parse_ltl(const std::string& text) {
  Parser p(text);
  LtlPtr f = p.implies();
  if (p.cur.k != Tk::End) p.fail("end of input");
  return f;
}

std::string ltl_to_string(const LtlPtr& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

static void collect_atoms(const LtlPtr& f, std::vector<std::string>& out) {
  if (!f) return;
  if (f->op == LtlOp::Atom) out.push_back(f->atom);
  collect_atoms(f->lhs, out);
  collect_atoms(f->rhs, out);
}

std::vector<std::string> ltl_atoms(const LtlPtr& f) {
  std::vector<std::string> out;
  collect_atoms(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool ltl_eval_finite(const LtlPtr& f, const std::vector<std::string>& atoms,
                     const std::vector<Letter>& word) {
  if (word.empty()) throw std::invalid_argument("ltl_eval_finite: word must be nonempty");
  NodeTab t = make_tab(f, atoms);
  size_t n = word.size();
  std::vector<std::vector<char>> v(t.nodes.size(), std::vector<char>(n, 0));
  for (size_t p = n; p-- > 0;) {
    for (size_t i = 0; i < t.nodes.size(); ++i) {
      const NodeTab::N& nd = t.nodes[i];
      switch (nd.op) {
        case LtlOp::Atom:
          v[i][p] = word[p] >> nd.atom & 1;
          break;
        case LtlOp::True:
          v[i][p] = 1;
          break;
        case LtlOp::Not:
          v[i][p] = !v[nd.l][p];
          break;
        case LtlOp::And:
          v[i][p] = v[nd.l][p] && v[nd.r][p];
          break;
        case LtlOp::Or:
          v[i][p] = v[nd.l][p] || v[nd.r][p];
          break;
        case LtlOp::Next:
          v[i][p] = p + 1 < n && v[nd.l][p + 1];
          break;
        case LtlOp::Until:
          v[i][p] = v[nd.r][p] || (v[nd.l][p] && p + 1 < n && v[i][p + 1]);
          break;
        default:
          break;
      }
    }
  }
  return v[t.root][0];
}

bool ltl_eval_lasso(const LtlPtr& f, const std::vector<std::string>& atoms,
                    const std::vector<Letter>& stem, const std::vector<Letter>& cycle) {
  if (cycle.empty()) throw std::invalid_argument("ltl_eval_lasso: cycle must be nonempty");
  NodeTab t = make_tab(f, atoms);
  size_t m = stem.size() + cycle.size();
  auto letter_at = [&](size_t p) { return p < stem.size() ? stem[p] : cycle[p - stem.size()]; };
  auto succ = [&](size_t p) { return p + 1 < m ? p + 1 : stem.size(); };
  std::vector<std::vector<char>> v(t.nodes.size(), std::vector<char>(m, 0));
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    const NodeTab::N& n = t.nodes[i];
    switch (n.op) {
      case LtlOp::Atom:
        for (size_t p = 0; p < m; ++p) v[i][p] = letter_at(p) >> n.atom & 1;
        break;
      case LtlOp::True:
        v[i].assign(m, 1);
        break;
      case LtlOp::Not:
        for (size_t p = 0; p < m; ++p) v[i][p] = !v[n.l][p];
        break;
      case LtlOp::And:
        for (size_t p = 0; p < m; ++p) v[i][p] = v[n.l][p] && v[n.r][p];
        break;
      case LtlOp::Or:
        for (size_t p = 0; p < m; ++p) v[i][p] = v[n.l][p] || v[n.r][p];
        break;
      case LtlOp::Next:
        for (size_t p = 0; p < m; ++p) v[i][p] = v[n.l][succ(p)];
        break;
      case LtlOp::Until: {
        // least fixpoint of b or (a and X self) over the looped positions
        v[i] = v[n.r];
        for (bool grew = true; grew;) {
          grew = false;
          for (size_t p = m; p-- > 0;)
            if (!v[i][p] && v[n.l][p] && v[i][succ(p)]) v[i][p] = 1, grew = true;
        }
        break;
      }
      default:
        break;
    }
  }
  return v[t.root][0];
}

Nbw ltl_to_nbw(const LtlPtr& f, const std::vector<std::string>& atoms) {
  Tableau T = build_tableau(f, atoms);
  const NodeTab& t = T.tab;
  size_t ns = T.val.size();
  size_t k = std::max<size_t>(t.untils.size(), 1);

  // a state leaves the i-th acceptance class once its until is not pending
  auto settled = [&](size_t s, size_t i) {
    if (t.untils.empty()) return true;
    int u = t.untils[i];
    return !T.val[s][u] || T.val[s][t.nodes[u].r];
  };

  uint64_t pairs = 0;
  for (size_t s = 0; s < ns; ++s)
    for (size_t d = 0; d < ns; ++d) pairs += T.step[s][d];
  guard_letters(T, pairs, k);

  Nbw a;
  a.atoms = atoms;
  for (size_t s = 0; s < ns; ++s)
    for (size_t i = 0; i < k; ++i)
      a.add_state("m" + std::to_string(s) + "#" + std::to_string(i));
  auto id = [&](size_t s, size_t i) { return static_cast<uint32_t>(s * k + i); };
  for (size_t s = 0; s < ns; ++s) {
    if (T.init[s]) a.initial.push_back(id(s, 0));
    if (settled(s, 0)) a.accepting.push_back(id(s, 0));
  }
  for (size_t s = 0; s < ns; ++s) {
    std::vector<Letter> letters = widen(T, s);
    for (size_t i = 0; i < k; ++i) {
      size_t ni = settled(s, i) ? (i + 1) % k : i;
      for (size_t d = 0; d < ns; ++d) {
        if (!T.step[s][d]) continue;
        for (Letter l : letters) a.add_transition(id(s, i), l, id(d, ni));
      }
    }
  }
  a.normalize();
  return a;
}

Nfw ltlf_to_nfw(const LtlPtr& f, const std::vector<std::string>& atoms) {
  Tableau T = build_tableau(f, atoms);
  size_t ns = T.val.size();

  uint64_t pairs = ns;  // halting moves
  for (size_t s = 0; s < ns; ++s)
    for (size_t d = 0; d < ns; ++d) pairs += T.step[s][d];
  guard_letters(T, pairs, 1);

  Nfw a;
  a.atoms = atoms;
  for (size_t s = 0; s < ns; ++s) a.add_state("m" + std::to_string(s));
  uint32_t done = a.add_state("done");
  a.accepting = {done};
  for (size_t s = 0; s < ns; ++s)
    if (T.init[s]) a.initial.push_back(static_cast<uint32_t>(s));
  for (size_t s = 0; s < ns; ++s) {
    std::vector<Letter> letters = widen(T, s);
    for (size_t d = 0; d < ns; ++d) {
      if (!T.step[s][d]) continue;
      for (Letter l : letters)
        a.add_transition(static_cast<uint32_t>(s), l, static_cast<uint32_t>(d));
    }
    if (T.terminal[s])
      for (Letter l : letters) a.add_transition(static_cast<uint32_t>(s), l, done);
  }
  a.normalize();
  return a;
}

}  // namespace pmcp
