#include <cmath>
#include <random>

#include "doctest.h"
#include "tfta/analysis.hpp"

using namespace tfta;

namespace {

BasicEvents system_basics() {
  return {{"A", {"A", 1e-6}}, {"B", {"B", 1e-6}}, {"E", {"E", 1e-9}}, {"U", {"U", 5e-6}}};
}

Sequence seq(const std::string& text) {
  RewriteOptions o;
  o.mode = RewriteMode::kExtended;
  auto t = to_tdnf(parse_expr(text), o).tdnf;
  REQUIRE(t.seqs.size() == 1);
  return t.seqs[0];
}

}  // namespace

TEST_CASE("basic series values at mission time") {
  TimeGrid g{400.0, 4001};
  auto a = basic_series({"A", 1e-6}, g);
  CHECK(a.F_end() == doctest::Approx(3.9992001e-4).epsilon(1e-6));
  CHECK(a.f_end() == doctest::Approx(9.9960008e-7).epsilon(1e-6));
  // formula value for the switch; see the notes on the printed table
  auto u = basic_series({"U", 5e-6}, g);
  CHECK(u.F_end() == doctest::Approx(1.9980013e-3).epsilon(1e-6));
  CHECK(u.f_end() == doctest::Approx(4.9900100e-6).epsilon(1e-6));
  auto z = basic_series({"Z", 0.0}, g);
  CHECK(z.F.maxCoeff() == 0.0);
  CHECK(z.f.maxCoeff() == 0.0);
}

TEST_CASE("pand series against the closed-form antiderivative") {
  // F_{A<B}(t) = int_0^t (1-exp(-l u)) l exp(-l u) du
  //            = (1-exp(-l t)) - (1-exp(-2 l t))/2   for equal rates
  TimeGrid g{100.0, 4001};
  auto a = basic_series({"A", 1e-3}, g);
  auto b = basic_series({"B", 1e-3}, g);
  auto p = pand_series(a, b, g);
  const double frozen = 4.527958503031e-3;  // evaluated from the antiderivative
  CHECK(p.F_end() == doctest::Approx(frozen).epsilon(1e-8));
  SUBCASE("left false series gives zero") {
    QuantSeries zero = sand_series(g);
    auto q = pand_series(zero, b, g);
    CHECK(q.F.maxCoeff() == 0.0);
  }
}

TEST_CASE("probabilistic completion holds on the grid") {
  TimeGrid g{1000.0, 4001};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logu(std::log(1e-9), std::log(1e-4));
  for (int i = 0; i < 20; ++i) {
    double la = std::exp(logu(rng)), lb = std::exp(logu(rng));
    auto a = basic_series({"A", la}, g);
    auto b = basic_series({"B", lb}, g);
    auto ab = pand_series(a, b, g);
    auto ba = pand_series(b, a, g);
    double worst = (ab.F + ba.F - a.F * b.F).abs().maxCoeff();
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("sand series is zero") {
  TimeGrid g{400.0, 101};
  auto s = sand_series(g);
  CHECK(s.F.maxCoeff() == 0.0);
  auto m = mcss_exact(seq("A = B"), system_basics(), g);
  CHECK(m.F.maxCoeff() == 0.0);
}

TEST_CASE("exact sequence quantification") {
  TimeGrid g{400.0, 4001};
  BasicEvents basics = system_basics();

  SUBCASE("single event equals the basic series") {
    auto m = mcss_exact(seq("A"), basics, g);
    auto b = basic_series({"A", 1e-6}, g);
    CHECK(m.F_end() == doctest::Approx(b.F_end()).epsilon(1e-9));
    CHECK(m.f_end() == doctest::Approx(b.f_end()).epsilon(1e-9));
  }
  SUBCASE("guarded sequence density carries the reliabilities") {
    // f of !B!E & (U < A) is (1-F_E)(1-F_B) F_U f_A up to the guard-rate
    // correction that keeps f = dF/dt
    auto m = mcss_exact(seq("(!B & !E) & (U < A)"), basics, g);
    double t = 400.0;
    double FE = 1 - std::exp(-1e-9 * t), FB = 1 - std::exp(-1e-6 * t);
    double FU = 1 - std::exp(-5e-6 * t), fA = 1e-6 * std::exp(-1e-6 * t);
    CHECK(m.f_end() == doctest::Approx((1 - FE) * (1 - FB) * FU * fA).epsilon(2e-4));
  }
  SUBCASE("the comparison-system TOP") {
    AnalysisOptions o;
    Tdnf d = disjoint_pipeline(parse_expr("(A | E) & (B | E | (U < A))"),
                               {"A", "B", "E", "U"}, o);
    auto s = top_series(d, basics, g, QuantMethod::kExact);
    CHECK(s.F_end() == doctest::Approx(9.5940e-7).epsilon(5e-4));
    CHECK(s.f_end() == doctest::Approx(3.7955e-9).epsilon(5e-4));
  }
}

TEST_CASE("series invariants") {
  TimeGrid g{400.0, 4001};
  BasicEvents basics = system_basics();
  const char* seqs[] = {"A", "U < A", "(!B & !E) & (U < A)", "A & B", "!E & (A & B)"};
  for (const char* s : seqs) {
    auto m = mcss_exact(seq(s), basics, g);
    CHECK(m.F(0) == 0.0);
    CHECK(m.F.minCoeff() >= 0.0);
    CHECK(m.F.maxCoeff() <= 1.0);
    for (int i = 1; i < g.points; ++i) CHECK(m.F(i) >= m.F(i - 1) - 1e-15);
    CHECK(m.f.minCoeff() >= -1e-12);
    // central finite difference of F matches f at interior points
    double h = g.step();
    for (int i = 1; i + 1 < g.points; i += 500) {
      double dF = (m.F(i + 1) - m.F(i - 1)) / (2 * h);
      if (m.f(i) > 1e-300) CHECK(std::abs(dF - m.f(i)) / m.f(i) <= 1e-4);
    }
  }
}

TEST_CASE("approximation closed forms") {
  BasicEvents b6;
  for (auto n : {"X1", "X2", "X3", "X28", "X38"}) b6.emplace(n, BasicEventData{n, 1e-6});
  double t = 1000.0;
  SUBCASE("rank-2 sequence") {
    auto p = mcss_approx(seq("X1 < X2"), b6, t);
    CHECK(p.F == doctest::Approx(5e-7).epsilon(1e-12));
    CHECK(p.f == doctest::Approx(1e-9).epsilon(1e-12));
  }
  SUBCASE("extended rank-2: coverage factor two") {
    auto p = mcss_approx(seq("X28 & X38"), b6, t);
    CHECK(p.F == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(p.f == doctest::Approx(2e-9).epsilon(1e-12));
  }
  SUBCASE("rank-3 pure sequence") {
    auto p = mcss_approx(seq("X1 < X2 < X3"), b6, t);
    CHECK(p.F == doctest::Approx(1e-9 / 6).epsilon(1e-12));
    // the time derivative of t^3/6 scaling: 0.5e-12 at these numbers
    CHECK(p.f == doctest::Approx(5e-13).epsilon(1e-12));
  }
  SUBCASE("SAND sequences contribute nothing") {
    auto p = mcss_approx(seq("(X1 = X2) < X3"), b6, t);
    CHECK(p.F == 0.0);
    CHECK(p.f == 0.0);
  }
}

TEST_CASE("approximation is conservative and close for small rates") {
  TimeGrid g{1000.0, 4001};
  BasicEvents b;
  b.emplace("A", BasicEventData{"A", 1e-6});
  b.emplace("B", BasicEventData{"B", 1e-6});
  b.emplace("C", BasicEventData{"C", 1e-6});
  for (const char* s : {"A < B", "A < B < C"}) {
    auto ex = mcss_exact(seq(s), b, g);
    auto ap = mcss_approx(seq(s), b, 1000.0);
    CHECK(std::abs(ap.F - ex.F_end()) / ex.F_end() <= 1e-2);
    CHECK(ap.F >= ex.F_end());  // small-value form overestimates
  }
}

TEST_CASE("top aggregation and the three methods") {
  BasicEvents basics = system_basics();
  TimeGrid g{400.0, 4001};
  ExprPtr top = parse_expr("(A | E) & (B | E | (U < A))");
  AnalysisOptions o;
  Tdnf d = disjoint_pipeline(top, {"A", "B", "E", "U"}, o);

  auto exact = top_series(d, basics, g, QuantMethod::kExact);
  auto approx1 = top_series(d, basics, g, QuantMethod::kApprox);
  CHECK(approx1.F_end() == doctest::Approx(9.5984e-7).epsilon(5e-5));
  CHECK(approx1.f_end() == doctest::Approx(3.7988e-9).epsilon(5e-5));

  Mcss raw = mcss_pipeline(top, o);
  Tdnf raw_t;
  raw_t.seqs = raw.sequences;
  auto approx2 = top_series(raw_t, basics, g, QuantMethod::kApprox);
  CHECK(approx2.F_end() == doctest::Approx(9.6000e-7).epsilon(5e-5));
  CHECK(approx2.f_end() == doctest::Approx(3.8000e-9).epsilon(5e-5));

  CHECK(approx2.F_end() >= exact.F_end());  // conservative
  CHECK_THROWS_AS(top_series(raw_t, basics, g, QuantMethod::kExact), std::invalid_argument);
}

TEST_CASE("failure rate from F and f") {
  TimeGrid g{400.0, 4001};
  BasicEvents basics = system_basics();
  SUBCASE("F == 0 gives lambda == f") {
    auto z = sand_series(g);
    auto li = lambda_of(z);
    CHECK(li.lambda.maxCoeff() == 0.0);
  }
  SUBCASE("conservative Boolean variant has lambda above f") {
    AnalysisOptions o;
    Tdnf d = disjoint_pipeline(parse_expr("(A & B) | U | E"), {"A", "B", "E", "U"}, o);
    auto s = top_series(d, basics, g, QuantMethod::kExact);
    CHECK(s.F_end() == doctest::Approx(1.9986e-3).epsilon(1e-4));
    CHECK(s.f_end() == doctest::Approx(4.9918e-6).epsilon(1e-4));
    auto li = lambda_of(s);
    CHECK(li.lambda(g.points - 1) == doctest::Approx(5.0018e-6).epsilon(1e-4));
    CHECK_FALSE(li.f_approximates_lambda);  // F is no longer negligible
  }
  SUBCASE("F reaching one is an error") {
    QuantSeries s;
    s.grid = g;
    s.F = Eigen::ArrayXd::Ones(g.points);
    s.f = Eigen::ArrayXd::Zero(g.points);
    CHECK_THROWS_AS(lambda_of(s), std::domain_error);
  }
}
