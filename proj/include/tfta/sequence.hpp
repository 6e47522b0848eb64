/// @file sequence.hpp
/// Event sequences and the temporal disjunctive normal form (TDNF).
///
/// A sequence is one PAND chain of core items, optionally guarded by a set
/// of negated events.  A guard is scoped at the completion instant of the
/// chain: the guarded events must not have occurred when the chain's last
/// core item completes.
#pragma once

#include <string>
#include <vector>

#include "tfta/expr.hpp"

namespace tfta {

enum class CoreKind {
  kSim,    // one instant: a single event or a SAND-joined set
  kLoose,  // extended core event: AND-joined events, only the latest instant
           // is anchored in the chain
};

struct Core {
  CoreKind kind = CoreKind::kSim;
  std::vector<EventId> events;  // sorted, nonempty, unique

  bool single() const { return events.size() == 1; }
  bool operator==(const Core& o) const = default;
};

/// One event sequence: guard (negated events, possibly empty) and chain.
/// An empty chain denotes the constant True.
struct Sequence {
  std::vector<EventId> guard;  // sorted, unique
  std::vector<Core> chain;

  /// Rank: number of atomic events in the chain (extended cores counted by
  /// set size).  Guarded events do not contribute.
  int rank() const;
  bool has_sand() const;
  bool has_loose() const;
  bool is_true() const { return chain.empty(); }
  std::vector<EventId> chain_events() const;
  bool operator==(const Sequence& o) const = default;
};

int compare(const Sequence& a, const Sequence& b);

/// Ordered disjunction of event sequences.
struct Tdnf {
  std::vector<Sequence> seqs;
  bool minimal = false;
  bool disjoint = false;
  bool rank_cutoff_hit = false;  // some sequences were dropped by the cutoff

  bool is_false() const { return seqs.empty(); }
};

ExprPtr to_expr(const Core& c);
ExprPtr to_expr(const Sequence& s);
ExprPtr to_expr(const Tdnf& t);

std::string to_string(const Sequence& s);
std::string to_string(const Tdnf& t);

void sort_canonical(std::vector<Sequence>& seqs);

}  // namespace tfta
