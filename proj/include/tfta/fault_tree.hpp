/// @file fault_tree.hpp
/// Fault tree model: gates over basic events, with shared subtrees allowed.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tfta/expr.hpp"

namespace tfta {

enum class GateKind { kAnd, kOr, kNot, kPand, kSand };

struct Gate {
  GateKind kind;
  std::vector<std::string> children;  // gate ids or event ids, in input order
};

/// Basic event with a constant failure rate, 1/hour.  Non-repairable.
struct BasicEventData {
  EventId id;
  double lambda = 0.0;
};

struct AnalysisConfig {
  double mission_time = 1000.0;  // hours
  int grid_points = 4001;
  std::optional<int> rank_cutoff;
  bool drop_sand = false;  // drop SAND sequences already in the minimal form
};

struct FaultTree {
  std::string top;
  std::map<std::string, Gate> gates;
  std::map<EventId, BasicEventData> basic_events;
};

/// TOP failure function read directly from the tree; shared subtrees are
/// expanded by reference-copying so meshing survives as repeated
/// subexpressions.  Throws std::runtime_error on cycles or dangling ids.
ExprPtr expr_from_tree(const FaultTree& t);

}  // namespace tfta
