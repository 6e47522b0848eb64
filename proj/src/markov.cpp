/// @file markov.cpp
#include "tfta/markov.hpp"

#include <stdexcept>

namespace tfta {

QuantSeries markov_F(const BasicEvents& basics, const ExprPtr& e, const TimeGrid& g,
                     const MarkovLimits& limits) {
  std::set<EventId> evset = events_of(e);
  std::vector<EventId> events(evset.begin(), evset.end());
  if (static_cast<int>(events.size()) > limits.max_events)
    throw std::runtime_error("markov oracle size cap exceeded");

  SeqTreeLimits tl;
  tl.max_events_without_sand = limits.max_events;
  SeqTree tree = build_tree(events, /*with_sand=*/false, tl);
  Classified cls = classify(e, tree);
  std::vector<char> fail = cls.failure_set();

  size_t n = tree.nodes.size();
  // Transitions: from every state, each not-yet-failed event fires with its
  // constant rate.  SAND transitions are excluded (rate zero under
  // independence).
  struct Edge {
    int from, to;
    double rate;
  };
  std::vector<Edge> edges;
  std::vector<double> outflow(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    uint8_t ord = 0;
    for (uint8_t v : tree.nodes[i]) ord = std::max(ord, v);
    for (size_t j = 0; j < events.size(); ++j) {
      if (tree.nodes[i][j]) continue;
      auto it = basics.find(events[j]);
      if (it == basics.end()) throw std::runtime_error("missing rate data for " + events[j]);
      auto key = tree.nodes[i];
      key[j] = ord + 1;
      int to = tree.node_index(key);
      edges.push_back({static_cast<int>(i), to, it->second.lambda});
      outflow[i] += it->second.lambda;
    }
  }

  auto deriv = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    for (size_t i = 0; i < n; ++i) d(i) = -outflow[i] * p(i);
    for (const auto& ed : edges) d(ed.to) += ed.rate * p(ed.from);
    return d;
  };

  QuantSeries s;
  s.grid = g;
  s.F = Eigen::ArrayXd::Zero(g.points);
  s.f = Eigen::ArrayXd::Zero(g.points);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p(0) = 1.0;  // the all-zero root sorts first
  double h = g.step();

  auto record = [&](int idx) {
    double F = 0.0, f = 0.0;
    for (size_t i = 0; i < n; ++i)
      if (fail[i]) F += p(i);
    for (const auto& ed : edges)
      if (!fail[ed.from] && fail[ed.to]) f += ed.rate * p(ed.from);
    s.F(idx) = F;
    s.f(idx) = f;
  };

  record(0);
  for (int k = 1; k < g.points; ++k) {
    Eigen::VectorXd k1 = deriv(p);
    Eigen::VectorXd k2 = deriv(p + 0.5 * h * k1);
    Eigen::VectorXd k3 = deriv(p + 0.5 * h * k2);
    Eigen::VectorXd k4 = deriv(p + h * k3);
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    record(k);
  }
  s.lambda = s.f / (1.0 - s.F.min(1.0 - 1e-15));
  return s;
}

}  // namespace tfta
