/// @file normal_forms.hpp
/// Minimal cutset sequences, subsumption, coverage counting and the
/// disjoint (mutually exclusive) form.
#pragma once

#include <optional>
#include <set>
#include <vector>

#include "tfta/rewrite.hpp"
#include "tfta/sequence.hpp"

namespace tfta {

struct Mcss {
  std::vector<Sequence> sequences;  // canonical order
  bool rank_cutoff_hit = false;

  std::string report() const;  // `rank=<n> sand=<0|1> <sequence>` per line
};

/// True when `b` is covered by `a`: a & b rewrites to b, i.e. every failure
/// history of b already satisfies a.
bool is_subsumed(const Sequence& a, const Sequence& b);

struct MinimizeOptions {
  std::optional<int> rank_cutoff;
  bool drop_sand = false;
  RewriteMode mode = RewriteMode::kExtended;
};

/// Duplicate removal, structural and temporal subsumption pruning, and the
/// splitting of "partly non-minimal" extended sequences into their minimal
/// and covered parts.
Mcss minimize(const Tdnf& t, const MinimizeOptions& opts = {});

/// Qualitative view of an MCSS list: the guards that the distributive laws
/// introduced are dropped (each sequence is reported by the chain of its
/// minimal failure node), then duplicates and covered sequences are pruned
/// again.  This conservative projection mirrors the screening practice used
/// for large models; the exact guarded form feeds the disjoint
/// transformation instead.
Mcss positive_projection(const Mcss& m, const MinimizeOptions& opts = {});

struct DisjointOptions {
  RewriteMode mode = RewriteMode::kExtended;
  uint64_t budget = 4'000'000;
};

/// Shannon-like separation into mutually exclusive sequences.
/// Full mode produces temporal minterms over the whole universe; extended
/// mode splits only as far as needed for pairwise exclusivity, keeping
/// extended conjunctions intact.
Tdnf disjointify(const Mcss& m, const std::set<EventId>& universe,
                 const DisjointOptions& opts = {});

struct CoverageCount {
  int w = 0;                      // number of extended core events
  std::vector<long long> per_core;  // coverage factor per extended core
  long long total = 1;
};

/// Number of plain event sequences represented by one extended sequence.
/// SAND core items are not admitted here.
CoverageCount coverage(const Sequence& seq);

/// The full list of plain (SAND-free) sequences covered by an extended
/// sequence; its length equals coverage(seq).total.
std::vector<Sequence> expand_extended(const Sequence& seq);

}  // namespace tfta
