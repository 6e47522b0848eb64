/// @file seq_tree.cpp
#include "tfta/seq_tree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tfta {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

int SeqTree::node_index(const std::vector<uint8_t>& key) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), key);
  if (it == nodes.end() || *it != key) return -1;
  return static_cast<int>(it - nodes.begin());
}

bool SeqTree::node_has_sand(int i) const {
  const auto& k = nodes[i];
  std::array<int, 16> count{};
  for (uint8_t v : k)
    if (v) ++count[v];
  for (int c : count)
    if (c > 1) return true;
  return false;
}

SeqTree build_tree(const std::vector<EventId>& events, bool with_sand,
                   const SeqTreeLimits& limits) {
  int n = static_cast<int>(events.size());
  int cap = with_sand ? limits.max_events_with_sand : limits.max_events_without_sand;
  if (n < 1 || n > cap)
    throw std::runtime_error("sequential failure tree size out of range: n=" + std::to_string(n));

  SeqTree t;
  t.events = events;
  t.with_sand = with_sand;

  // Breadth-first enumeration: extend every node by one occurrence step,
  // i.e. a nonempty subset (singleton when SAND is excluded) of the events
  // that have not failed yet.
  std::vector<std::vector<uint8_t>> frontier{std::vector<uint8_t>(n, 0)};
  t.nodes.push_back(frontier[0]);
  for (int lvl = 0; lvl < n && !frontier.empty(); ++lvl) {
    std::vector<std::vector<uint8_t>> next;
    for (const auto& node : frontier) {
      std::vector<int> remaining;
      for (int i = 0; i < n; ++i)
        if (!node[i]) remaining.push_back(i);
      uint8_t ord = 0;
      for (uint8_t v : node) ord = std::max(ord, v);
      if (with_sand) {
        size_t m = remaining.size();
        for (size_t mask = 1; mask < (size_t{1} << m); ++mask) {
          auto child = node;
          for (size_t b = 0; b < m; ++b)
            if (mask & (size_t{1} << b)) child[remaining[b]] = ord + 1;
          next.push_back(std::move(child));
        }
      } else {
        for (int i : remaining) {
          auto child = node;
          child[i] = ord + 1;
          next.push_back(std::move(child));
        }
      }
    }
    t.nodes.insert(t.nodes.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::sort(t.nodes.begin(), t.nodes.end());
  t.nodes.erase(std::unique(t.nodes.begin(), t.nodes.end()), t.nodes.end());

  t.pred.resize(t.nodes.size());
  t.level.resize(t.nodes.size());
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& k = t.nodes[i];
    uint8_t last = 0;
    int failed = 0;
    for (uint8_t v : k) {
      last = std::max(last, v);
      if (v) ++failed;
    }
    t.level[i] = static_cast<uint8_t>(failed);
    if (last == 0) {
      t.pred[i] = -1;
    } else {
      auto p = k;
      for (auto& v : p)
        if (v == last) v = 0;
      t.pred[i] = t.node_index(p);
    }
  }
  return t;
}

double eval_first_true(const ExprPtr& e, const std::vector<EventId>& order,
                       const std::vector<double>& times) {
  switch (e->op()) {
    case Op::kFalse:
      return kInf;
    case Op::kTrue:
      return 0.0;
    case Op::kAtom: {
      auto it = std::find(order.begin(), order.end(), e->atom());
      if (it == order.end()) throw std::runtime_error("event not in tree: " + e->atom());
      return times[it - order.begin()];
    }
    case Op::kNot: {
      // A bare negation holds from t = 0 unless the operand ever occurs.
      double t = eval_first_true(e->kids()[0], order, times);
      return t == kInf ? 0.0 : kInf;
    }
    case Op::kOr: {
      double best = kInf;
      for (const auto& k : e->kids()) best = std::min(best, eval_first_true(k, order, times));
      return best;
    }
    case Op::kAnd: {
      // Negated conjuncts hold on [0, t_x): they guard the completion
      // instant of the non-negated part of this conjunction.
      double t = 0.0;
      bool any_positive = false;
      for (const auto& k : e->kids()) {
        if (k->op() == Op::kNot) continue;
        any_positive = true;
        t = std::max(t, eval_first_true(k, order, times));
      }
      if (!any_positive) {
        for (const auto& k : e->kids())
          if (eval_first_true(k, order, times) == kInf) return kInf;
        return 0.0;
      }
      if (t == kInf) return kInf;
      for (const auto& k : e->kids()) {
        if (k->op() != Op::kNot) continue;
        double tg = eval_first_true(k->kids()[0], order, times);
        if (tg <= t) return kInf;
      }
      return t;
    }
    case Op::kPand: {
      double ta = eval_first_true(e->kids()[0], order, times);
      double tb = eval_first_true(e->kids()[1], order, times);
      return (ta < tb && tb < kInf) ? tb : kInf;
    }
    case Op::kSand: {
      double t = eval_first_true(e->kids()[0], order, times);
      if (t == kInf) return kInf;
      for (size_t i = 1; i < e->kids().size(); ++i)
        if (eval_first_true(e->kids()[i], order, times) != t) return kInf;
      return t;
    }
  }
  return kInf;
}

std::vector<char> Classified::failure_set() const {
  std::vector<char> out(cls.size());
  for (size_t i = 0; i < cls.size(); ++i) out[i] = cls[i] != NodeClass::kNonFailure;
  return out;
}

int Classified::count(NodeClass c) const {
  int n = 0;
  for (auto v : cls)
    if (v == c) ++n;
  return n;
}

namespace {

Classified classify_from_failset(const SeqTree& t, const std::vector<char>& fail) {
  Classified out;
  out.tree = &t;
  out.cls.resize(t.nodes.size(), NodeClass::kNonFailure);
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    if (!fail[i]) continue;
    int p = t.pred[i];
    bool pred_failed = p >= 0 && fail[p];
    out.cls[i] = pred_failed ? NodeClass::kNonMinimalFailure : NodeClass::kMinimalFailure;
  }
  return out;
}

void check_events(const ExprPtr& e, const SeqTree& t) {
  for (const auto& ev : events_of(e))
    if (std::find(t.events.begin(), t.events.end(), ev) == t.events.end())
      throw std::runtime_error("event not in tree: " + ev);
}

}  // namespace

Classified classify(const ExprPtr& e, const SeqTree& t) {
  check_events(e, t);
  std::vector<char> fail(t.nodes.size(), 0);
  std::vector<double> times(t.events.size());
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    for (size_t j = 0; j < t.events.size(); ++j)
      times[j] = t.nodes[i][j] ? static_cast<double>(t.nodes[i][j]) : kInf;
    fail[i] = eval_first_true(e, t.events, times) < kInf;
  }
  return classify_from_failset(t, fail);
}

namespace {

using FailSet = std::vector<char>;

void close_down(const SeqTree& t, FailSet& f) {
  // Nodes are sorted so that a predecessor never follows its successors in
  // level order; a simple level sweep marks all successors.
  std::vector<int> order(t.nodes.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return t.level[a] < t.level[b]; });
  for (int i : order) {
    int p = t.pred[i];
    if (p >= 0 && f[p]) f[i] = 1;
  }
}

FailSet combine_sets(const ExprPtr& e, const SeqTree& t) {
  size_t n = t.nodes.size();
  switch (e->op()) {
    case Op::kFalse:
      return FailSet(n, 0);
    case Op::kTrue:
      return FailSet(n, 1);
    case Op::kAtom: {
      size_t j = std::find(t.events.begin(), t.events.end(), e->atom()) - t.events.begin();
      FailSet f(n, 0);
      for (size_t i = 0; i < n; ++i) f[i] = t.nodes[i][j] != 0;
      return f;
    }
    case Op::kNot: {
      FailSet f = combine_sets(e->kids()[0], t);
      for (auto& v : f) v = !v;
      return f;
    }
    case Op::kOr: {
      FailSet f(n, 0);
      for (const auto& k : e->kids()) {
        FailSet g = combine_sets(k, t);
        for (size_t i = 0; i < n; ++i) f[i] |= g[i];
      }
      close_down(t, f);
      return f;
    }
    case Op::kAnd: {
      FailSet f(n, 1);
      for (const auto& k : e->kids()) {
        FailSet g = combine_sets(k, t);
        for (size_t i = 0; i < n; ++i) f[i] = f[i] && g[i];
      }
      close_down(t, f);
      return f;
    }
    case Op::kPand: {
      // Minimal failure nodes of the right operand whose predecessor is
      // already a failure node of the left operand.
      FailSet fa = combine_sets(e->kids()[0], t);
      FailSet fb = combine_sets(e->kids()[1], t);
      FailSet f(n, 0);
      for (size_t i = 0; i < n; ++i) {
        int p = t.pred[i];
        if (p < 0) continue;
        f[i] = fb[i] && !fb[p] && fa[p];
      }
      close_down(t, f);
      return f;
    }
    case Op::kSand: {
      FailSet f = combine_sets(e->kids()[0], t);
      for (size_t ki = 1; ki < e->kids().size(); ++ki) {
        FailSet g = combine_sets(e->kids()[ki], t);
        FailSet h(n, 0);
        for (size_t i = 0; i < n; ++i) {
          int p = t.pred[i];
          bool amin = f[i] && (p < 0 || !f[p]);
          bool bmin = g[i] && (p < 0 || !g[p]);
          h[i] = amin && bmin;
        }
        close_down(t, h);
        f = std::move(h);
      }
      return f;
    }
  }
  return FailSet(n, 0);
}

}  // namespace

Classified classify_by_sets(const ExprPtr& e, const SeqTree& t) {
  check_events(e, t);
  FailSet f = combine_sets(e, t);
  return classify_from_failset(t, f);
}

namespace {

SeqTree tree_for_pair(const ExprPtr& e1, const ExprPtr& e2, const SeqTreeLimits& limits) {
  std::set<EventId> ev = events_of(e1);
  auto ev2 = events_of(e2);
  ev.insert(ev2.begin(), ev2.end());
  if (ev.empty()) ev.insert("_");  // constants still need one carrier event
  return build_tree(std::vector<EventId>(ev.begin(), ev.end()), true, limits);
}

}  // namespace

bool equivalent(const ExprPtr& e1, const ExprPtr& e2, const SeqTreeLimits& limits) {
  SeqTree t = tree_for_pair(e1, e2, limits);
  return classify(e1, t).failure_set() == classify(e2, t).failure_set();
}

bool oracle_disjoint(const ExprPtr& e1, const ExprPtr& e2, const SeqTreeLimits& limits) {
  SeqTree t = tree_for_pair(e1, e2, limits);
  auto f1 = classify(e1, t).failure_set();
  auto f2 = classify(e2, t).failure_set();
  for (size_t i = 0; i < f1.size(); ++i)
    if (f1[i] && f2[i]) return false;
  return true;
}

std::string to_dot(const Classified& c) {
  const SeqTree& t = *c.tree;
  std::ostringstream os;
  os << "digraph seqtree {\n  rankdir=TB;\n";
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    os << "  n" << i << " [label=\"";
    bool first = true;
    for (size_t j = 0; j < t.events.size(); ++j) {
      if (!t.nodes[i][j]) continue;
      if (!first) os << ' ';
      first = false;
      os << t.events[j] << ':' << int(t.nodes[i][j]);
    }
    if (first) os << "-";
    os << "\", shape=" << (t.node_has_sand(static_cast<int>(i)) ? "box" : "ellipse");
    if (c.cls[i] == NodeClass::kMinimalFailure)
      os << ", style=filled, fillcolor=black, fontcolor=white";
    else if (c.cls[i] == NodeClass::kNonMinimalFailure)
      os << ", style=filled, fillcolor=gray";
    os << "];\n";
  }
  for (size_t i = 0; i < t.nodes.size(); ++i)
    if (t.pred[i] >= 0) os << "  n" << t.pred[i] << " -> n" << i << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace tfta
