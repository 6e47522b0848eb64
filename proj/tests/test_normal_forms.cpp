#include "doctest.h"
#include "tfta/analysis.hpp"
#include "tfta/seq_tree.hpp"

using namespace tfta;

namespace {

Sequence seq(const std::string& text) {
  RewriteOptions o;
  o.mode = RewriteMode::kExtended;
  auto t = to_tdnf(parse_expr(text), o).tdnf;
  REQUIRE(t.seqs.size() == 1);
  return t.seqs[0];
}

std::vector<std::string> lines(const std::vector<Sequence>& seqs) {
  std::vector<std::string> out;
  for (const auto& s : seqs) out.push_back(to_string(s));
  return out;
}

}  // namespace

TEST_CASE("subsumption") {
  CHECK(is_subsumed(seq("A < B"), seq("A < B < C")));           // absorption
  CHECK(is_subsumed(seq("!B & A"), seq("A < B")));              // temporal non-minimality
  CHECK_FALSE(is_subsumed(seq("!B & A"), seq("C < A")));        // already minimal
  CHECK(is_subsumed(seq("A"), seq("B < A")));
  CHECK_FALSE(is_subsumed(seq("A < B"), seq("B < A")));
  // orientation: a & b rewrites to b exactly when b is covered by a
  auto conj = conjoin_sequences(seq("!B & A"), seq("A < B"));
  REQUIRE(conj.size() == 1);
  CHECK(to_string(conj[0]) == "A < B");
}

TEST_CASE("minimize on the comparison-system TOP") {
  AnalysisOptions o;
  Mcss m = mcss_pipeline(parse_expr("(A | E) & (B | E | (U < A))"), o);
  CHECK(lines(m.sequences) == std::vector<std::string>{"E", "A & B", "U < A"});
}

TEST_CASE("minimize removes duplicates") {
  AnalysisOptions o;
  Mcss m = mcss_pipeline(parse_expr("X | X"), o);
  CHECK(lines(m.sequences) == std::vector<std::string>{"X"});
}

TEST_CASE("partly non-minimal extended sequences are split") {
  // X20 < (X1 & X15) against the smaller X1 < X15: the covered ordering is
  // absorbed, the other survives split off.
  AnalysisOptions o;
  o.drop_sand = true;
  Mcss m = mcss_pipeline(parse_expr("(X1 < X15) | (X20 < (X1 & X15))"), o);
  CHECK(lines(m.sequences) ==
        std::vector<std::string>{"X1 < X15", "(X15 & X20) < X1"});
}

TEST_CASE("minimize never increases rank") {
  AnalysisOptions o;
  const char* cases[] = {"(A | E) & (B | E | (U < A))", "(A < (B | C)) | (B & C)",
                         "(A & B) | (A & B & C) | C"};
  for (const char* s : cases) {
    auto t = to_tdnf(parse_expr(s), o.rewrite()).tdnf;
    int max_before = 0;
    for (const auto& q : t.seqs) max_before = std::max(max_before, q.rank());
    Mcss m = minimize(t, o.minimizer());
    for (const auto& q : m.sequences) CHECK(q.rank() <= max_before);
  }
}

TEST_CASE("semantic preservation through minimize and disjointify") {
  const char* cases[] = {"(A | E) & (B | E | (U < A))", "A < (B | C)",
                         "(A & B) | (B < C)", "(A | B) < C"};
  AnalysisOptions o;
  for (const char* s : cases) {
    ExprPtr e = parse_expr(s);
    auto t = to_tdnf(e, o.rewrite()).tdnf;
    Mcss m = minimize(t, o.minimizer());
    CHECK_MESSAGE(equivalent(e, to_expr(Tdnf{m.sequences})), "minimize changed ", s);
    std::set<EventId> uni = events_of(e);
    Tdnf d = disjointify(m, uni, {});
    // union of state classes equals the failure set
    std::vector<EventId> ev(uni.begin(), uni.end());
    SeqTree tr = build_tree(ev, true);
    auto want = classify(e, tr).failure_set();
    std::vector<char> got(tr.nodes.size(), 0);
    for (const auto& sq : d.seqs) {
      for (size_t i = 0; i < tr.nodes.size(); ++i) {
        // state reading: chain realized, guards not failed in the state
        std::vector<double> times(ev.size());
        for (size_t j = 0; j < ev.size(); ++j)
          times[j] = tr.nodes[i][j] ? double(tr.nodes[i][j])
                                    : std::numeric_limits<double>::infinity();
        bool chain_ok =
            eval_first_true(to_expr(Sequence{{}, sq.chain}), ev, times) <
            std::numeric_limits<double>::infinity();
        bool guards_ok = true;
        for (const auto& g : sq.guard) {
          size_t j = std::find(ev.begin(), ev.end(), g) - ev.begin();
          guards_ok = guards_ok && tr.nodes[i][j] == 0;
        }
        if (chain_ok && guards_ok) {
          CHECK_MESSAGE(want[i], "disjoint form fires outside the failure set for ", s);
          CHECK_MESSAGE(!got[i], "state classes overlap for ", s);
          got[i] = 1;
        }
      }
    }
    CHECK_MESSAGE(got == want, "disjoint form misses failure states for ", s);
  }
}

TEST_CASE("disjointify on the comparison system") {
  AnalysisOptions o;
  Mcss m = minimal_form(parse_expr("(A | E) & (B | E | (U < A))"), o);
  Tdnf d = disjointify(m, {"A", "B", "E", "U"}, {});
  CHECK(lines(d.seqs) ==
        std::vector<std::string>{"E", "!E & (A & B)", "!B & !E & U < A"});
  CHECK(d.disjoint);
}

TEST_CASE("coverage counting") {
  CHECK(coverage(seq("(X1 & X2) < X3")).total == 2);
  CHECK(coverage(seq("X1 < (X2 & X3)")).total == 4);
  CHECK(coverage(seq("X1 < X2 < (X3 & X4)")).total == 6);
  CHECK(coverage(seq("(X1 & X2) < (X3 & X4)")).total == 12);
  CHECK(coverage(seq("X1 < X2")).total == 1);
  CHECK_THROWS_AS(coverage(seq("(X1 = X2) < X3")), std::invalid_argument);
}

TEST_CASE("expand_extended lists the covered plain sequences") {
  auto got = expand_extended(seq("(X1 & X2) < (X3 & X4)"));
  CHECK(got.size() == 12);
  // spot check listed and unlisted permutations
  bool has1 = false, has2 = false, has3 = false;
  for (const auto& s : got) {
    has1 = has1 || to_string(s) == "X1 < X2 < X3 < X4";
    has2 = has2 || to_string(s) == "X4 < X2 < X1 < X3";
    has3 = has3 || to_string(s) == "X3 < X4 < X1 < X2";
  }
  CHECK(has1);
  CHECK(has2);
  CHECK_FALSE(has3);  // the second group would complete before the first
  CHECK(expand_extended(seq("X1 < X2 < (X3 & X4)")).size() == 6);
  auto atomic = expand_extended(seq("A < B"));
  REQUIRE(atomic.size() == 1);
  CHECK(to_string(atomic[0]) == "A < B");
}

TEST_CASE("coverage equals expansion length over small universes") {
  // exhaustive over every extended chain shape with <= 5 events
  std::vector<EventId> ev{"E1", "E2", "E3", "E4", "E5"};
  // enumerate compositions of n into parts, each part a core; mark one or
  // more parts as extended (size >= 2)
  for (int n = 2; n <= 5; ++n) {
    std::vector<std::vector<int>> comps;
    std::function<void(int, std::vector<int>)> gen = [&](int left, std::vector<int> acc) {
      if (left == 0) {
        comps.push_back(acc);
        return;
      }
      for (int k = 1; k <= left; ++k) {
        auto a = acc;
        a.push_back(k);
        gen(left - k, a);
      }
    };
    gen(n, {});
    for (const auto& comp : comps) {
      bool any_big = false;
      for (int k : comp) any_big = any_big || k >= 2;
      if (!any_big) continue;
      Sequence s;
      int next = 0;
      for (int k : comp) {
        Core c;
        c.kind = k >= 2 ? CoreKind::kLoose : CoreKind::kSim;
        for (int j = 0; j < k; ++j) c.events.push_back(ev[next++]);
        s.chain.push_back(c);
      }
      CHECK_MESSAGE(coverage(s).total == static_cast<long long>(expand_extended(s).size()),
                    "coverage mismatch for ", to_string(s));
    }
  }
}
