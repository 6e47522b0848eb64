/// @file seq_tree.hpp
/// Sequential failure trees: exhaustive enumeration of failure orderings.
///
/// Nodes are sequence vectors K over the event list; K[i] = 0 when event i
/// has not failed, otherwise the ordinal position of its failure instant
/// (equal ordinals = simultaneous).  Used as the logical oracle for
/// equivalence, minimality and disjointness of temporal expressions.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfta/expr.hpp"

namespace tfta {

struct SeqTreeLimits {
  int max_events_with_sand = 6;
  int max_events_without_sand = 8;
};

enum class NodeClass : uint8_t { kNonFailure, kMinimalFailure, kNonMinimalFailure };

struct SeqTree {
  std::vector<EventId> events;  // canonical order
  bool with_sand = false;
  // nodes[i] holds the ordinal of events[i]; node 0 is the all-zero root.
  std::vector<std::vector<uint8_t>> nodes;
  std::vector<int> pred;       // index of the unique predecessor (-1 for root)
  std::vector<uint8_t> level;  // number of failed events

  int node_index(const std::vector<uint8_t>& key) const;
  bool node_has_sand(int i) const;
};

SeqTree build_tree(const std::vector<EventId>& events, bool with_sand,
                   const SeqTreeLimits& limits = {});

struct Classified {
  const SeqTree* tree = nullptr;
  std::vector<NodeClass> cls;

  std::vector<char> failure_set() const;
  int count(NodeClass c) const;
};

/// Direct recursive evaluation of e on each node's realized ordering.
Classified classify(const ExprPtr& e, const SeqTree& t);

/// Second, independent path: the node-set combination rules (union,
/// intersection with monotone closure, the PAND/SAND/negation rules).
Classified classify_by_sets(const ExprPtr& e, const SeqTree& t);

bool equivalent(const ExprPtr& e1, const ExprPtr& e2, const SeqTreeLimits& limits = {});
bool oracle_disjoint(const ExprPtr& e1, const ExprPtr& e2, const SeqTreeLimits& limits = {});

/// First instant at which e becomes true along a realized ordering given as
/// per-event occurrence times (use +infinity for "never"); returns
/// +infinity when e never becomes true.  Negated events hold on [0, t).
double eval_first_true(const ExprPtr& e, const std::vector<EventId>& order,
                       const std::vector<double>& times);

/// DOT export mirroring the figure conventions: minimal nodes filled,
/// non-minimal hatched (drawn gray), SAND nodes as boxes.
std::string to_dot(const Classified& c);

}  // namespace tfta
