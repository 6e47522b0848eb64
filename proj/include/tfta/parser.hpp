/// @file parser.hpp
/// Text front end: expression strings and line-oriented model files.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tfta/fault_tree.hpp"

namespace tfta {

/// Parse failure with 1-based line/column position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int col)
      : std::runtime_error(std::move(msg)), line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

/// Semantic/model validation failure (duplicate ids, cycles, bad config...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expression syntax: `&` AND, `|` OR, `!` NOT, `<` PAND, `=` SAND,
/// parentheses, `true`/`false`; precedence NOT > SAND > PAND > AND > OR.
/// Result is canonicalized.
ExprPtr parse_expr(const std::string& text);

struct Model {
  FaultTree tree;
  AnalysisConfig config;
};

/// Line format (# comments):
///   event <id> lambda=<float>
///   gate <id> <AND|OR|NOT|PAND|SAND> <child>...
///   top <id>
///   config mission_time=<float> grid_points=<int> [rank_cutoff=<int>]
///          [drop_sand=<0|1>]
Model parse_model(const std::string& text);

std::string print_model(const Model& m);

struct MonotoneReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
};

/// Negations are accepted only where they keep the failure function
/// monotone: a negated term must be AND-combined with at least one
/// non-negated term, and negations must not feed OR, PAND or SAND.
MonotoneReport check_monotone(const ExprPtr& e);

}  // namespace tfta
