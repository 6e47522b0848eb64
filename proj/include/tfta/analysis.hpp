/// @file analysis.hpp
/// End-to-end pipelines shared by the command line tool and the test
/// harness: expression -> TDNF -> MCSS -> disjoint form -> quantification.
#pragma once

#include "tfta/markov.hpp"
#include "tfta/monte_carlo.hpp"
#include "tfta/normal_forms.hpp"
#include "tfta/parser.hpp"
#include "tfta/quantify.hpp"

namespace tfta {

struct AnalysisOptions {
  RewriteMode mode = RewriteMode::kExtended;
  std::optional<int> rank_cutoff;
  bool drop_sand = false;
  uint64_t budget = 4'000'000;

  RewriteOptions rewrite() const {
    RewriteOptions o;
    o.mode = mode;
    o.rank_cutoff = rank_cutoff;
    o.drop_sand = drop_sand;
    o.budget = budget;
    return o;
  }
  MinimizeOptions minimizer() const {
    MinimizeOptions o;
    o.rank_cutoff = rank_cutoff;
    o.drop_sand = drop_sand;
    o.mode = mode;
    return o;
  }
};

/// TDNF -> minimal form, guards kept (exact semantics).
inline Mcss minimal_form(const ExprPtr& e, const AnalysisOptions& opts) {
  auto r = to_tdnf(e, opts.rewrite());
  return minimize(r.tdnf, opts.minimizer());
}

/// Qualitative MCSS report (guards projected away, re-pruned).
inline Mcss mcss_pipeline(const ExprPtr& e, const AnalysisOptions& opts) {
  return positive_projection(minimal_form(e, opts), opts.minimizer());
}

/// Minimal form -> pairwise disjoint form over the given universe.
inline Tdnf disjoint_pipeline(const ExprPtr& e, const std::set<EventId>& universe,
                              const AnalysisOptions& opts) {
  DisjointOptions d;
  d.mode = opts.mode;
  d.budget = opts.budget;
  return disjointify(minimal_form(e, opts), universe, d);
}

inline std::set<EventId> model_universe(const Model& m) {
  std::set<EventId> u;
  for (const auto& [id, b] : m.tree.basic_events) u.insert(id);
  return u;
}

inline BasicEvents model_basics(const Model& m) {
  BasicEvents b;
  for (const auto& [id, be] : m.tree.basic_events) b.emplace(id, be);
  return b;
}

}  // namespace tfta
