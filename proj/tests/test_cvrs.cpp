#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "pmcp/cvrs.hpp"
#include "pmcp/json_io.hpp"
#include "testutil.hpp"

using namespace pmcp;

static std::string data(const char* name) { return std::string(PMCP_DATA_DIR "/") + name; }

// The four-edge cycle fixture: a1: p->q, a2: p->q, c1: q->r, c2: r->p.
static Cvrs cycle_cvrs() {
  return cvrs_of(load_template_file(data("r_cycle.json")));
}

// transition ids in the fixture's edge order
enum { A1 = 0, A2 = 1, C1 = 2, C2 = 3 };
enum { P = 0, Q = 1, R = 2 };

TEST_CASE("steps move mass along full tuples") {
  Cvrs v = cycle_cvrs();
  REQUIRE(v.trans.size() == 4);

  SUBCASE("unit step of the c action") {
    CvrsConfig c = {Rat(1), Rat(1), Rat(1)};
    auto r = step(v, c, {{C1, C2}, Rat(1)});
    REQUIRE(r.ok);
    CHECK(r.cfg == CvrsConfig{Rat(2), Rat(0), Rat(1)});
  }

  SUBCASE("fractional multiplicity") {
    CvrsConfig c = {Rat(0), Rat(1), Rat(1)};
    auto r = step(v, c, {{C1, C2}, Rat(1, 2)});
    REQUIRE(r.ok);
    CHECK(r.cfg == CvrsConfig{Rat(1, 2), Rat(1, 2), Rat(1)});
  }

  SUBCASE("drawing from an empty state is rejected") {
    CvrsConfig c = {Rat(2), Rat(0), Rat(0)};
    auto r = step(v, c, {{C1, C2}, Rat(1)});
    REQUIRE(!r.ok);
    CHECK(r.error.find("state") != std::string::npos);
  }

  SUBCASE("mass can be split below one") {
    // both a slots draw from p, so alpha=1 needs mass 2 there
    CvrsConfig c = {Rat(1), Rat(0), Rat(0)};
    CHECK(!step(v, c, {{A1, A2}, Rat(1)}).ok);
    auto r = step(v, c, {{A1, A2}, Rat(1, 2)});
    REQUIRE(r.ok);
    CHECK(r.cfg == CvrsConfig{Rat(0), Rat(1), Rat(0)});
  }
}

TEST_CASE("trace operators") {
  Cvrs v = cycle_cvrs();
  CvrsTrace tr;
  tr.start = {Rat(1), Rat(1), Rat(1)};
  tr.steps = {{{C1, C2}, Rat(1)}, {{A1, A2}, Rat(1)}};
  auto end = trace_end(v, tr);
  REQUIRE(end.has_value());
  CHECK(*end == CvrsConfig{Rat(0), Rat(2), Rat(1)});

  SUBCASE("identity scale and shift") {
    CHECK(trace_end(v, scale_trace(tr, Rat(1))) == end);
    CHECK(trace_end(v, shift_trace(tr, CvrsConfig{Rat(0), Rat(0), Rat(0)})) == end);
  }

  SUBCASE("scaling halves everything") {
    auto half = scale_trace(tr, Rat(1, 2));
    auto e = trace_end(v, half);
    REQUIRE(e.has_value());
    CHECK(*e == CvrsConfig{Rat(0), Rat(1), Rat(1, 2)});
  }

  SUBCASE("convex combination of two traces ends at the midpoint") {
    CvrsTrace tr2;
    tr2.start = tr.start;
    tr2.steps = {{{C1, C2}, Rat(1)}};
    auto e1 = *trace_end(v, tr);
    auto e2 = *trace_end(v, tr2);

    auto h1 = scale_trace(tr, Rat(1, 2));
    auto h2 = scale_trace(tr2, Rat(1, 2));
    // run half of tr with the other half of the start parked, then half of
    // tr2 with tr's half-endpoint parked
    auto combined = concat_traces(shift_trace(h1, h2.start), shift_trace(h2, *trace_end(v, h1)));
    auto e = trace_end(v, combined);
    REQUIRE(e.has_value());
    CvrsConfig mid(3);
    for (int s = 0; s < 3; ++s) mid[s] = (e1[s] + e2[s]) * Rat(1, 2);
    CHECK(*e == mid);
  }
}

TEST_CASE("forward and backward closures") {
  Cvrs v = cycle_cvrs();
  std::vector<uint32_t> all = {A1, A2, C1, C2};

  SUBCASE("from p only the a action can fire") {
    CvrsConfig c = {Rat(1), Rat(0), Rat(0)};
    CHECK(forw(v, c, all) == std::vector<uint32_t>{P, Q});
  }

  SUBCASE("empty support stays empty") {
    CvrsConfig c = {Rat(0), Rat(0), Rat(0)};
    CHECK(forw(v, c, all).empty());
    CHECK(back(v, c, all).empty());
  }

  SUBCASE("full support is a fixed point") {
    CvrsConfig c = {Rat(1), Rat(1), Rat(1)};
    CHECK(forw(v, c, all) == std::vector<uint32_t>{P, Q, R});
    CHECK(back(v, c, all) == std::vector<uint32_t>{P, Q, R});
  }
}

TEST_CASE("reachability certificates") {
  Cvrs v = cycle_cvrs();

  SUBCASE("empty trace") {
    CvrsConfig c = {Rat(1), Rat(2), Rat(0)};
    CHECK(check_reach_certificate(v, c, c, {Rat(0), Rat(0), Rat(0), Rat(0)}));
  }

  SUBCASE("one full a step") {
    CHECK(check_reach_certificate(v, {Rat(2), Rat(0), Rat(0)}, {Rat(0), Rat(2), Rat(0)},
                                  {Rat(1), Rat(1), Rat(0), Rat(0)}));
  }

  SUBCASE("unbalanced coefficients fail") {
    CHECK(!check_reach_certificate(v, {Rat(1), Rat(0), Rat(0)}, {Rat(0), Rat(1), Rat(0)},
                                   {Rat(1), Rat(0), Rat(0), Rat(0)}));
  }
}

TEST_CASE("cvrs reachability decisions") {
  Cvrs v = cycle_cvrs();

  SUBCASE("identity") {
    CvrsConfig c = {Rat(1), Rat(1, 3), Rat(0)};
    auto r = cvrs_reachable(v, c, c);
    CHECK(r.reachable);
  }

  SUBCASE("p mass converts to q mass at any scale") {
    auto r = cvrs_reachable(v, {Rat(2), Rat(0), Rat(0)}, {Rat(0), Rat(2), Rat(0)});
    REQUIRE(r.reachable);
    CHECK(check_reach_certificate(v, {Rat(2), Rat(0), Rat(0)}, {Rat(0), Rat(2), Rat(0)}, r.mu));
    CHECK(cvrs_reachable(v, {Rat(1), Rat(0), Rat(0)}, {Rat(0), Rat(1), Rat(0)}).reachable);
  }

  SUBCASE("q cannot turn into p") {
    // c2 needs r-mass, and producing it via c1 consumes the q-mass for good
    CHECK(!cvrs_reachable(v, {Rat(0), Rat(1), Rat(0)}, {Rat(1), Rat(0), Rat(0)}).reachable);
  }

  SUBCASE("the fixture pseudo-cycle configuration loops") {
    CvrsConfig c = {Rat(1), Rat(2), Rat(1)};
    auto r = cvrs_reachable(v, c, c);
    CHECK(r.reachable);
  }
}

TEST_CASE("scaling soundness on random instances") {
  testutil::Rng rng(31337);
  for (int it = 0; it < 60; ++it) {
    Cvrs v = testutil::random_cvrs(rng);
    CvrsConfig c, cp;
    for (uint32_t s = 0; s < v.nstates; ++s) {
      c.push_back(Rat(rng.range(0, 2)));
      cp.push_back(Rat(rng.range(0, 2)));
    }
    bool base = cvrs_reachable(v, c, cp).reachable;
    for (Rat gamma : {Rat(2), Rat(1, 3), Rat(7, 5)}) {
      CvrsConfig sc, scp;
      for (uint32_t s = 0; s < v.nstates; ++s) {
        sc.push_back(c[s] * gamma);
        scp.push_back(cp[s] * gamma);
      }
      CHECK(cvrs_reachable(v, sc, scp).reachable == base);
    }
  }
}

TEST_CASE("integer reachability implies continuous reachability") {
  testutil::Rng rng(4242);
  int positives = 0;
  for (int it = 0; it < 80; ++it) {
    Cvrs v = testutil::random_cvrs(rng);
    std::vector<int> c0(v.nstates, 0);
    int mass = 1 + static_cast<int>(rng.below(4));
    for (int i = 0; i < mass; ++i) ++c0[rng.below(v.nstates)];
    auto reach = testutil::vrs_reach_set(v, c0);
    for (const auto& target : reach) {
      ++positives;
      auto r = cvrs_reachable(v, testutil::to_rat_config(c0), testutil::to_rat_config(target));
      REQUIRE_MESSAGE(r.reachable, "integer-reachable target rejected");
      CHECK(check_reach_certificate(v, testutil::to_rat_config(c0),
                                    testutil::to_rat_config(target), r.mu));
    }
  }
  CHECK(positives > 100);
}

TEST_CASE("trace invariants on random walks") {
  testutil::Rng rng(555);
  for (int it = 0; it < 120; ++it) {
    Cvrs v = testutil::random_cvrs(rng);
    std::vector<int> c0(v.nstates, 0);
    int mass = 1 + static_cast<int>(rng.below(4));
    for (int i = 0; i < mass; ++i) ++c0[rng.below(v.nstates)];

    std::vector<int> cur = c0;
    std::vector<Rat> mu(v.trans.size(), Rat(0));
    std::set<uint32_t> touched;
    std::set<uint32_t> union_support;
    for (uint32_t s = 0; s < v.nstates; ++s)
      if (c0[s] > 0) union_support.insert(s);

    size_t len = rng.below(6);
    for (size_t i = 0; i < len; ++i) {
      auto steps = testutil::vrs_steps(v, cur);
      if (steps.empty()) break;
      const auto& tup = steps[rng.below(steps.size())];
      for (uint32_t t : tup) {
        mu[t] += Rat(1);
        touched.insert(t);
      }
      cur = testutil::vrs_apply(v, cur, tup);
      for (uint32_t s = 0; s < v.nstates; ++s)
        if (cur[s] > 0) union_support.insert(s);
    }

    // accumulated multiplicities satisfy flow and balance, and the full
    // certificate accepts the endpoints
    CvrsConfig rc = testutil::to_rat_config(c0), re = testutil::to_rat_config(cur);
    CHECK(check_reach_certificate(v, rc, re, mu));

    // support bookkeeping: forw from the start equals back from the end
    // equals everything the trace ever occupied
    std::vector<uint32_t> used(touched.begin(), touched.end());
    auto fw = forw(v, rc, used);
    auto bk = back(v, re, used);
    std::vector<uint32_t> want(union_support.begin(), union_support.end());
    CHECK(fw == want);
    CHECK(bk == want);
    std::set<uint32_t> start_plus_dst;
    for (uint32_t s = 0; s < v.nstates; ++s)
      if (c0[s] > 0) start_plus_dst.insert(s);
    for (uint32_t t : used) start_plus_dst.insert(v.trans[t].dst);
    CHECK(std::vector<uint32_t>(start_plus_dst.begin(), start_plus_dst.end()) == want);
  }
}

TEST_CASE("midpoints of reachable configurations are reachable") {
  testutil::Rng rng(777);
  for (int it = 0; it < 40; ++it) {
    Cvrs v = testutil::random_cvrs(rng);
    std::vector<int> c0(v.nstates, 0);
    int mass = 1 + static_cast<int>(rng.below(4));
    for (int i = 0; i < mass; ++i) ++c0[rng.below(v.nstates)];
    auto reach = testutil::vrs_reach_set(v, c0);
    if (reach.size() < 2) continue;
    auto it1 = reach.begin(), it2 = reach.begin();
    std::advance(it1, rng.below(reach.size()));
    std::advance(it2, rng.below(reach.size()));

    CvrsConfig mid(v.nstates);
    for (uint32_t s = 0; s < v.nstates; ++s)
      mid[s] = (Rat((*it1)[s]) + Rat((*it2)[s])) * Rat(1, 2);

    std::set<uint32_t> su;
    for (uint32_t s = 0; s < v.nstates; ++s)
      if ((*it1)[s] > 0 || (*it2)[s] > 0) su.insert(s);
    CHECK(config_support(mid) == std::vector<uint32_t>(su.begin(), su.end()));
    CHECK(cvrs_reachable(v, testutil::to_rat_config(c0), mid).reachable);
  }
}

TEST_CASE("equal-support flows with consistent coefficients are realizable") {
  testutil::Rng rng(808);
  int built = 0;
  for (int it = 0; it < 200 && built < 60; ++it) {
    Cvrs v = testutil::random_cvrs(rng);
    // coefficients from whole random tuples keep the balance equations true
    std::vector<Rat> mu(v.trans.size(), Rat(0));
    std::vector<std::vector<uint32_t>> slot(v.k);
    bool full = true;
    for (uint32_t i = 1; i <= v.k; ++i) {
      for (uint32_t t = 0; t < v.trans.size(); ++t)
        if (v.trans[t].index == i && v.trans[t].action == v.trans[0].action)
          slot[i - 1].push_back(t);
      if (slot[i - 1].empty()) full = false;
    }
    if (!full) continue;
    size_t picks = 1 + rng.below(3);
    for (size_t i = 0; i < picks; ++i) {
      Rat m = testutil::random_rat(rng, 1, 2, 3);
      for (uint32_t j = 0; j < v.k; ++j)
        mu[slot[j][rng.below(slot[j].size())]] += m;
    }

    // start with all states positive and scale the flow down until the
    // endpoint stays positive, giving equal supports on both ends
    CvrsConfig c(v.nstates, Rat(1));
    CvrsConfig delta(v.nstates, Rat(0));
    for (uint32_t t = 0; t < v.trans.size(); ++t) {
      delta[v.trans[t].src] -= mu[t];
      delta[v.trans[t].dst] += mu[t];
    }
    Rat biggest(0);
    for (const Rat& d : delta) {
      Rat a = d.sgn() < 0 ? -d : d;
      if (biggest < a) biggest = a;
    }
    if (biggest.sgn() > 0) {
      Rat shrink = Rat(1, 2) / biggest;
      for (Rat& m : mu) m *= shrink;
      for (Rat& d : delta) d *= shrink;
    }
    CvrsConfig cp(v.nstates);
    for (uint32_t s = 0; s < v.nstates; ++s) cp[s] = c[s] + delta[s];

    ++built;
    CHECK(cvrs_reachable(v, c, cp).reachable);
  }
  CHECK(built >= 40);
}
