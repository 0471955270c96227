#include "pmcp/ratlp.hpp"

#include <cassert>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pmcp {

size_t LinearSystem::add_var(std::string name) {
  vars.push_back(std::move(name));
  return vars.size() - 1;
}

void LinearSystem::add_row(std::vector<Rat> a, Rel rel, Rat b) {
  assert(a.size() <= vars.size());
  a.resize(vars.size());
  rows.push_back({std::move(a), rel, std::move(b)});
}

Rat LinearSystem::dot(const std::vector<Rat>& a, const std::vector<Rat>& x) {
  Rat s;
  size_t n = a.size() < x.size() ? a.size() : x.size();
  for (size_t i = 0; i < n; ++i)
    if (!a[i].is_zero() && !x[i].is_zero()) s += a[i] * x[i];
  return s;
}

bool LinearSystem::satisfied_by(const std::vector<Rat>& x) const {
  if (x.size() != vars.size()) return false;
  for (const Rat& v : x)
    if (v.sgn() < 0) return false;
  for (const Row& r : rows) {
    Rat lhs = dot(r.a, x);
    if (r.rel == Rel::Eq ? lhs != r.b : lhs < r.b) return false;
  }
  return true;
}

Solution Solution::zero(size_t nvars) {
  Solution s;
  s.value.assign(nvars, Rat(0));
  return s;
}

void Solution::recompute_support() {
  support.clear();
  for (size_t i = 0; i < value.size(); ++i)
    if (value[i].sgn() > 0) support.push_back(i);
}

bool FarkasCertificate::verify(const LinearSystem& sys) const {
  if (y.size() != sys.rows.size()) return false;
  for (size_t r = 0; r < y.size(); ++r)
    if (sys.rows[r].rel == LinearSystem::Rel::Ge && y[r].sgn() < 0) return false;
  for (size_t j = 0; j < sys.vars.size(); ++j) {
    Rat col;
    for (size_t r = 0; r < y.size(); ++r)
      if (!y[r].is_zero() && !sys.rows[r].a[j].is_zero()) col += y[r] * sys.rows[r].a[j];
    if (col.sgn() > 0) return false;
  }
  Rat rhs;
  for (size_t r = 0; r < y.size(); ++r)
    if (!y[r].is_zero()) rhs += y[r] * sys.rows[r].b;
  return rhs.sgn() > 0;
}

namespace {

// Dense phase-one tableau. Columns: structural vars, then one surplus per Ge
// row, then one artificial per row, then the rhs.
struct Tableau {
  size_t nstruct, nsurplus, nart, ncols;  // ncols excludes rhs
  std::vector<std::vector<Rat>> t;        // nrows x (ncols+1)
  std::vector<Rat> cost;                  // reduced-cost row, ncols+1 (last = -objective)
  std::vector<size_t> basis;              // per row, basic column
  std::vector<bool> banned;               // artificials that left the basis

  Rat& rhs(size_t r) { return t[r][ncols]; }
};

}  // namespace

LpResult lp_feasible(const LinearSystem& sys) {
  const size_t n = sys.vars.size();
  const size_t m = sys.rows.size();
  LpResult res;

  if (m == 0) {
    res.feasible = true;
    res.sol = Solution::zero(n);
    return res;
  }

  Tableau tb;
  tb.nstruct = n;
  tb.nsurplus = 0;
  for (const auto& r : sys.rows)
    if (r.rel == LinearSystem::Rel::Ge) ++tb.nsurplus;
  tb.nart = m;
  tb.ncols = n + tb.nsurplus + m;
  tb.t.assign(m, std::vector<Rat>(tb.ncols + 1, Rat(0)));
  tb.banned.assign(tb.ncols, false);

  // Row sign flips applied to reach rhs >= 0; remembered for the certificate.
  std::vector<int> flip(m, 1);
  size_t surplus_at = n;
  for (size_t r = 0; r < m; ++r) {
    const auto& row = sys.rows[r];
    for (size_t j = 0; j < n; ++j) tb.t[r][j] = row.a[j];
    if (row.rel == LinearSystem::Rel::Ge) tb.t[r][surplus_at++] = Rat(-1);
    tb.t[r][tb.ncols] = row.b;
    if (row.b.sgn() < 0) {
      flip[r] = -1;
      for (auto& v : tb.t[r]) v = -v;
    }
    tb.t[r][n + tb.nsurplus + r] = Rat(1);
  }
  tb.basis.resize(m);
  for (size_t r = 0; r < m; ++r) tb.basis[r] = n + tb.nsurplus + r;

  // Phase-one cost: minimize the artificial sum. Reduced costs start as
  // c_j - sum over rows of column j (c is 1 on artificials, 0 elsewhere).
  tb.cost.assign(tb.ncols + 1, Rat(0));
  for (size_t j = 0; j <= tb.ncols; ++j) {
    Rat s;
    for (size_t r = 0; r < m; ++r) s += tb.t[r][j];
    bool is_art = j >= n + tb.nsurplus && j < tb.ncols;
    tb.cost[j] = (is_art ? Rat(1) : Rat(0)) - s;
  }

  for (;;) {
    // Bland: smallest eligible entering column.
    size_t enter = tb.ncols;
    for (size_t j = 0; j < tb.ncols; ++j) {
      if (tb.banned[j]) continue;
      if (tb.cost[j].sgn() < 0) {
        enter = j;
        break;
      }
    }
    if (enter == tb.ncols) break;  // optimal

    size_t leave = m;
    Rat best;
    for (size_t r = 0; r < m; ++r) {
      if (tb.t[r][enter].sgn() <= 0) continue;
      Rat ratio = tb.rhs(r) / tb.t[r][enter];
      if (leave == m || ratio < best ||
          (ratio == best && tb.basis[r] < tb.basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == m)
      throw std::logic_error("phase-one objective unbounded below; cannot happen");

    // Pivot on (leave, enter).
    size_t old_basic = tb.basis[leave];
    if (old_basic >= n + tb.nsurplus && old_basic < tb.ncols) tb.banned[old_basic] = true;
    Rat piv = tb.t[leave][enter];
    for (auto& v : tb.t[leave]) v /= piv;
    for (size_t r = 0; r < m; ++r) {
      if (r == leave || tb.t[r][enter].is_zero()) continue;
      Rat f = tb.t[r][enter];
      for (size_t j = 0; j <= tb.ncols; ++j) tb.t[r][j] -= f * tb.t[leave][j];
    }
    if (!tb.cost[enter].is_zero()) {
      Rat f = tb.cost[enter];
      for (size_t j = 0; j <= tb.ncols; ++j) tb.cost[j] -= f * tb.t[leave][j];
    }
    tb.basis[leave] = enter;
  }

  // Objective value = -cost[rhs].
  Rat obj = -tb.cost[tb.ncols];
  if (obj.sgn() > 0) {
    // Farkas multipliers from the artificial reduced costs, undoing flips.
    res.feasible = false;
    res.cert.y.resize(m);
    for (size_t r = 0; r < m; ++r) {
      Rat yr = Rat(1) - tb.cost[n + tb.nsurplus + r];
      res.cert.y[r] = flip[r] < 0 ? -yr : yr;
    }
    assert(res.cert.verify(sys));
    return res;
  }

  res.feasible = true;
  res.sol = Solution::zero(n);
  for (size_t r = 0; r < m; ++r)
    if (tb.basis[r] < n) res.sol.value[tb.basis[r]] = tb.rhs(r);
  res.sol.recompute_support();
  assert(sys.satisfied_by(res.sol.value));
  return res;
}

Solution support_maximal_solution(const LinearSystem& sys, const std::vector<size_t>& probes,
                                  bool parallel) {
#ifndef NDEBUG
  for (const auto& r : sys.rows)
    assert(r.rel == LinearSystem::Rel::Ge ? r.b.sgn() >= 0 : r.b.is_zero());
#endif
  const size_t n = sys.vars.size();
  std::vector<Solution> parts(probes.size());
  std::vector<char> ok(probes.size(), 0);

  auto solve_probe = [&](size_t i) {
    LinearSystem probed = sys;
    std::vector<Rat> row(n, Rat(0));
    row[probes[i]] = Rat(1);
    probed.add_row(std::move(row), LinearSystem::Rel::Ge, Rat(1));
    LpResult r = lp_feasible(probed);
    if (r.feasible) {
      parts[i] = std::move(r.sol);
      ok[i] = 1;
    }
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (size_t i = 0; i < probes.size(); ++i) solve_probe(i);
  } else {
    for (size_t i = 0; i < probes.size(); ++i) solve_probe(i);
  }

  Solution sum = Solution::zero(n);
  for (size_t i = 0; i < probes.size(); ++i) {
    if (!ok[i]) continue;
    for (size_t j = 0; j < n; ++j) sum.value[j] += parts[i].value[j];
  }
  sum.recompute_support();
  return sum;
}

}  // namespace pmcp
