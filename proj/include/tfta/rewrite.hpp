/// @file rewrite.hpp
/// The temporal-logic rewrite engine: transforms any monotone temporal
/// expression into its (extended) temporal disjunctive normal form.
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tfta/sequence.hpp"

namespace tfta {

enum class RewriteMode {
  kFull,      // every conjunction of events is broken up via completion
  kExtended,  // Boolean distribution first; coprime AND groups stay intact
              // as extended core events
};

struct RewriteStep {
  std::string law;
  std::string before;
  std::string after;
};

struct RewriteTrace {
  std::vector<RewriteStep> steps;
  uint64_t applied = 0;  // total law applications (also the budget meter)
  bool capture = false;
  size_t capture_limit = 10000;

  void record(const char* law, const std::string& before, const std::string& after);
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonMonotoneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RewriteOptions {
  RewriteMode mode = RewriteMode::kFull;
  uint64_t budget = 1'000'000;
  std::optional<int> rank_cutoff;
  bool drop_sand = false;  // drop SAND-carrying sequences from the result
};

struct RewriteResult {
  Tdnf tdnf;
  RewriteTrace trace;
};

RewriteResult to_tdnf(const ExprPtr& e, const RewriteOptions& opts = {},
                      bool capture_trace = false);

/// Law of completion: a & b = (a<b) | (a=b) | (b<a); the three disjuncts are
/// mutually exclusive.  Throws std::invalid_argument when an operand is a
/// negated event (the law must not be used there).
Tdnf complete_and(const ExprPtr& a, const ExprPtr& b, RewriteMode mode = RewriteMode::kFull);

/// Law of contradiction on a PAND chain of core items: False as soon as an
/// atomic event is anchored at two instants; an extended core event absorbs
/// earlier occurrences and contradicts later ones.
ExprPtr contradiction(const ExprPtr& e);

/// a < (b < c)  =  (a & b) < c.
ExprPtr pand_assoc(const ExprPtr& e, RewriteMode mode = RewriteMode::kFull);

/// a = (b < c)  =  b < (a = c).
ExprPtr sand_over_pand(const ExprPtr& e, RewriteMode mode = RewriteMode::kFull);

/// Temporal distributive law, type I:  a < (b | c).
Tdnf distribute_pand_right(const ExprPtr& a, const std::vector<ExprPtr>& ors,
                           RewriteMode mode = RewriteMode::kFull);

/// Temporal distributive law, type II:  (a | b) < c = (a<c) | (b<c).
Tdnf distribute_pand_left(const std::vector<ExprPtr>& ors, const ExprPtr& c,
                          RewriteMode mode = RewriteMode::kFull);

/// SAND-OR distributive law:  a = (b | c).
Tdnf distribute_sand_or(const ExprPtr& a, const std::vector<ExprPtr>& ors,
                        RewriteMode mode = RewriteMode::kFull);

/// Temporal laws of negation: expansion of !(inner) & ctx.
ExprPtr negate_in_context(const ExprPtr& inner, const ExprPtr& ctx);

/// Conjunction of negated atoms with a temporal term; False when a negated
/// event is anchored in the chain, otherwise the guard attaches per the
/// scoping rules.
Tdnf push_negated(const std::set<EventId>& negs, const ExprPtr& e,
                  RewriteMode mode = RewriteMode::kFull);

/// True/False rules (x < true = false, true < x = x, ...) plus the Boolean
/// constant rules, applied recursively; no other law is used.
ExprPtr const_fold(const ExprPtr& e);

/// Removes every sequence subsumed by another one (temporal absorption).
Tdnf absorb(const Tdnf& t);

/// Exact cover test between sequences: true iff every failure history of
/// `covered` is a failure history of `covering`.
bool sequence_covers(const Sequence& covering, const Sequence& covered);

/// Pairwise conjunction of two sequences as a TDNF (empty = disjoint).
std::vector<Sequence> conjoin_sequences(const Sequence& a, const Sequence& b,
                                        const RewriteOptions& opts = {});

}  // namespace tfta
