/// @file expr.hpp
/// Temporal failure expressions: Boolean connectives plus the two
/// sequence operators PAND (strictly before) and SAND (simultaneous).
#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace tfta {

/// Symbolic name of a basic (atomic) failure event.  Lexicographic order
/// over ids is the canonical order used for all deterministic output.
using EventId = std::string;

enum class Op {
  kFalse,
  kTrue,
  kAtom,
  kNot,
  kAnd,
  kOr,
  kPand,  // binary, chains associate to the left
  kSand,  // n-ary, commutative and associative
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node.  Expressions are values; sharing is safe.
class Expr {
 public:
  Op op() const { return op_; }
  const EventId& atom() const { return atom_; }
  const std::vector<ExprPtr>& kids() const { return kids_; }
  size_t hash() const { return hash_; }

  static ExprPtr make_false();
  static ExprPtr make_true();
  static ExprPtr atom(EventId id);
  static ExprPtr negate(ExprPtr e);
  /// n-ary connectives; two or more children expected (one child collapses).
  static ExprPtr conj(std::vector<ExprPtr> kids);
  static ExprPtr disj(std::vector<ExprPtr> kids);
  static ExprPtr pand(ExprPtr lhs, ExprPtr rhs);
  static ExprPtr pand_chain(const std::vector<ExprPtr>& kids);
  static ExprPtr sand(std::vector<ExprPtr> kids);

  Expr(Op op, EventId atom, std::vector<ExprPtr> kids);

 private:
  Op op_;
  EventId atom_;
  std::vector<ExprPtr> kids_;
  size_t hash_;
};

/// Total deterministic order: constants < atoms by id < composites by
/// operator tag, then by children.
int compare(const ExprPtr& a, const ExprPtr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);

/// Canonical form: And/Or/Sand flattened (And only across children without
/// direct negations, so that the scope of a negated conjunct is kept),
/// children sorted, constants folded at the Boolean level, n-ary PAND
/// left-associated.  parse(print(e)) == canonicalize(e) is a fixpoint.
ExprPtr canonicalize(const ExprPtr& e);

/// All atomic events occurring in e, negated or not.
std::set<EventId> events_of(const ExprPtr& e);

/// Membership in a pure conjunction chain (all-AND, all-PAND or all-SAND, or
/// a single atom).  Throws std::invalid_argument on any other shape.
bool is_part_of(const EventId& x, const ExprPtr& e);

/// Canonical text syntax: `&` `|` `!` `<` (PAND) `=` (SAND); precedence
/// NOT > SAND > PAND > AND > OR.
std::string to_string(const ExprPtr& e);

struct ExprPtrLess {
  bool operator()(const ExprPtr& a, const ExprPtr& b) const {
    return compare(a, b) < 0;
  }
};

}  // namespace tfta
