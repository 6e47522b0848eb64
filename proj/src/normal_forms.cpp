/// @file normal_forms.cpp
#include "tfta/normal_forms.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "tfta/seq_tree.hpp"

namespace tfta {

namespace {

std::string seq_text(const Sequence& s) { return to_string(s); }

std::vector<EventId> support_of(const Sequence& s) {
  auto ev = s.chain_events();
  ev.insert(ev.end(), s.guard.begin(), s.guard.end());
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
  return ev;
}

bool seqs_disjoint(const Sequence& a, const Sequence& b, RewriteMode mode) {
  thread_local std::map<std::pair<std::string, std::string>, bool> cache;
  std::string ka = seq_text(a), kb = seq_text(b);
  if (kb < ka) ka.swap(kb);
  std::pair<std::string, std::string> key{std::move(ka), std::move(kb)};
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  RewriteOptions opts;
  opts.mode = mode;
  opts.budget = 2'000'000;
  bool d = conjoin_sequences(a, b, opts).empty();
  cache.emplace(key, d);
  return d;
}

// Mutual exclusivity in the state reading: no reachable failure state
// satisfies both sequences when their guards are read as "not failed at
// observation time".  This is the exclusivity the disjoint form provides
// and the one under which the per-sequence probabilities sum exactly.
bool state_disjoint(const Sequence& a, const Sequence& b, RewriteMode mode) {
  std::vector<EventId> guards = a.guard;
  guards.insert(guards.end(), b.guard.begin(), b.guard.end());
  auto ca = a.chain_events();
  auto cb = b.chain_events();
  for (const auto& g : guards)
    if (std::binary_search(ca.begin(), ca.end(), g) ||
        std::binary_search(cb.begin(), cb.end(), g))
      return true;
  return seqs_disjoint(Sequence{{}, a.chain}, Sequence{{}, b.chain}, mode);
}

// State-cover: every state of b is a state of a.  Guards may only shrink.
bool state_covers(const Sequence& a, const Sequence& b) {
  if (!std::includes(b.guard.begin(), b.guard.end(), a.guard.begin(), a.guard.end()))
    return false;
  return sequence_covers(a, b);
}

void prune_insert(std::vector<Sequence>& acc, const Sequence& s) {
  for (const auto& e : acc)
    if (sequence_covers(e, s)) return;
  std::erase_if(acc, [&](const Sequence& e) { return sequence_covers(s, e); });
  acc.push_back(s);
}

void state_prune_insert(std::vector<Sequence>& acc, const Sequence& s) {
  for (const auto& e : acc)
    if (state_covers(e, s)) return;
  std::erase_if(acc, [&](const Sequence& e) { return state_covers(s, e); });
  acc.push_back(s);
}

// Split one extended core by its final instant group: the other members of
// the core merge, unordered, into the part of the chain before it.
std::vector<Sequence> split_loose_core(const Sequence& s, size_t core_idx, RewriteMode mode) {
  RewriteOptions opts;
  opts.mode = mode;
  const Core& K = s.chain[core_idx];
  std::vector<Sequence> out;
  size_t kk = K.events.size();
  for (size_t t_mask = 1; t_mask < (size_t{1} << kk); ++t_mask) {
    std::vector<EventId> T, rest;
    for (size_t b = 0; b < kk; ++b)
      (t_mask & (size_t{1} << b) ? T : rest).push_back(K.events[b]);
    // Prefix (everything before the core) conjoined with the unordered rest.
    Sequence prefix{{}, std::vector<Core>(s.chain.begin(), s.chain.begin() + core_idx)};
    std::vector<Sequence> heads;
    if (rest.empty()) {
      heads = {prefix};
    } else {
      Core rc;
      rc.kind = rest.size() > 1 ? CoreKind::kLoose : CoreKind::kSim;
      rc.events = rest;
      std::sort(rc.events.begin(), rc.events.end());
      heads = conjoin_sequences(prefix, Sequence{{}, {rc}}, opts);
    }
    Core t_core;
    t_core.kind = CoreKind::kSim;
    t_core.events = T;
    std::sort(t_core.events.begin(), t_core.events.end());
    for (const auto& h : heads) {
      Sequence part;
      part.guard = s.guard;
      part.guard.insert(part.guard.end(), h.guard.begin(), h.guard.end());
      std::sort(part.guard.begin(), part.guard.end());
      part.guard.erase(std::unique(part.guard.begin(), part.guard.end()), part.guard.end());
      part.chain = h.chain;
      part.chain.push_back(t_core);
      part.chain.insert(part.chain.end(), s.chain.begin() + core_idx + 1, s.chain.end());
      out.push_back(std::move(part));
    }
  }
  return out;
}

}  // namespace

bool is_subsumed(const Sequence& a, const Sequence& b) { return sequence_covers(a, b); }

std::string Mcss::report() const {
  std::ostringstream os;
  for (const auto& s : sequences)
    os << "rank=" << s.rank() << " sand=" << (s.has_sand() ? 1 : 0) << ' ' << to_string(s) << "\n";
  return os.str();
}

Mcss minimize(const Tdnf& t, const MinimizeOptions& opts) {
  Mcss out;
  out.rank_cutoff_hit = t.rank_cutoff_hit;
  std::vector<Sequence> seqs;
  for (const auto& s : t.seqs) {
    if (opts.drop_sand && s.has_sand()) continue;
    if (opts.rank_cutoff && s.rank() > *opts.rank_cutoff) {
      out.rank_cutoff_hit = true;
      continue;
    }
    seqs.push_back(s);
  }

  // Alternate subsumption pruning with the splitting of partly non-minimal
  // extended sequences until stable.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Sequence> pruned;
    for (const auto& s : seqs) prune_insert(pruned, s);
    seqs = std::move(pruned);

    for (size_t i = 0; i < seqs.size() && !changed; ++i) {
      if (!seqs[i].has_loose()) continue;
      auto ev_i = seqs[i].chain_events();
      for (size_t j = 0; j < seqs.size() && !changed; ++j) {
        if (i == j) continue;
        auto ev_j = seqs[j].chain_events();
        if (ev_j.size() >= ev_i.size() ||
            !std::includes(ev_i.begin(), ev_i.end(), ev_j.begin(), ev_j.end()))
          continue;
        // seqs[j] may overlap part of the extended sequence: break the
        // extended core apart and commit the split only when it lets a part
        // be absorbed (the sequence is "partly non-minimal").
        size_t best = seqs[i].chain.size();
        size_t best_overlap = 0;
        for (size_t c = 0; c < seqs[i].chain.size(); ++c) {
          if (seqs[i].chain[c].kind != CoreKind::kLoose) continue;
          size_t ov = 0;
          for (const auto& e : seqs[i].chain[c].events)
            if (std::binary_search(ev_j.begin(), ev_j.end(), e)) ++ov;
          if (ov > best_overlap) {
            best_overlap = ov;
            best = c;
          }
        }
        if (best == seqs[i].chain.size() || best_overlap < 2) continue;
        auto parts = split_loose_core(seqs[i], best, opts.mode);
        bool any_absorbed = false;
        for (const auto& p : parts)
          any_absorbed = any_absorbed || sequence_covers(seqs[j], p);
        if (!any_absorbed) continue;
        seqs.erase(seqs.begin() + i);
        for (auto& p : parts) {
          if (opts.drop_sand && p.has_sand()) continue;
          if (opts.rank_cutoff && p.rank() > *opts.rank_cutoff) {
            out.rank_cutoff_hit = true;
            continue;
          }
          seqs.push_back(std::move(p));
        }
        changed = true;
      }
    }
  }
  sort_canonical(seqs);
  out.sequences = std::move(seqs);
  return out;
}

Mcss positive_projection(const Mcss& m, const MinimizeOptions& opts) {
  Tdnf t;
  t.rank_cutoff_hit = m.rank_cutoff_hit;
  for (auto s : m.sequences) {
    s.guard.clear();
    t.seqs.push_back(std::move(s));
  }
  sort_canonical(t.seqs);
  return minimize(t, opts);
}

Tdnf disjointify(const Mcss& m, const std::set<EventId>& universe, const DisjointOptions& opts) {
  RewriteOptions ropts;
  ropts.mode = opts.mode;
  ropts.budget = opts.budget;

  auto split_on = [&](const Sequence& s, const EventId& x) {
    std::vector<Sequence> parts;
    Sequence guarded = s;
    guarded.guard.push_back(x);
    std::sort(guarded.guard.begin(), guarded.guard.end());
    bool violated = false;
    for (const auto& c : guarded.chain)
      violated = violated ||
                 std::binary_search(c.events.begin(), c.events.end(), x);
    if (!violated) parts.push_back(std::move(guarded));
    Core xc;
    xc.kind = CoreKind::kSim;
    xc.events = {x};
    auto pos = conjoin_sequences(s, Sequence{{}, {xc}}, ropts);
    parts.insert(parts.end(), pos.begin(), pos.end());
    return parts;
  };

  std::vector<Sequence> seqs = m.sequences;
  uint64_t work = 0;

  if (opts.mode == RewriteMode::kFull) {
    // Temporal minterms: every sequence is extended until it mentions every
    // event of the universe, positively or negated.
    std::vector<Sequence> done;
    std::vector<Sequence> queue = seqs;
    while (!queue.empty()) {
      if (++work > opts.budget) throw BudgetExceeded("disjointify budget exceeded");
      Sequence u = queue.back();
      queue.pop_back();
      auto sup = support_of(u);
      std::vector<EventId> missing;
      std::set_difference(universe.begin(), universe.end(), sup.begin(), sup.end(),
                          std::back_inserter(missing));
      if (missing.empty()) {
        prune_insert(done, u);
        continue;
      }
      auto parts = split_on(u, missing.front());
      queue.insert(queue.end(), parts.begin(), parts.end());
    }
    // A final pruning pass: splitting may have produced parts that are only
    // covered by sequences inserted later.
    std::vector<Sequence> final_set;
    for (const auto& s : done) prune_insert(final_set, s);
    seqs = std::move(final_set);
  } else {
    // Split only as far as needed for pairwise exclusivity, keeping extended
    // conjunctions intact.  The later-listed sequence of an overlapping pair
    // picks up the guard, so earlier (lower-rank) sequences stay untouched.
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < seqs.size() && !changed; ++i) {
        for (size_t j = i + 1; j < seqs.size() && !changed; ++j) {
          if (state_disjoint(seqs[i], seqs[j], opts.mode)) continue;
          if (++work > opts.budget) throw BudgetExceeded("disjointify budget exceeded");
          auto sup_i = support_of(seqs[i]);
          auto sup_j = support_of(seqs[j]);
          std::vector<EventId> cand;
          std::set_difference(sup_i.begin(), sup_i.end(), sup_j.begin(), sup_j.end(),
                              std::back_inserter(cand));
          if (cand.empty())
            std::set_difference(universe.begin(), universe.end(), sup_j.begin(), sup_j.end(),
                                std::back_inserter(cand));
          if (cand.empty())
            throw std::runtime_error("disjointify: overlapping full-support sequences");
          auto parts = split_on(seqs[j], cand.front());
          seqs.erase(seqs.begin() + j);
          std::vector<Sequence> rebuilt;
          for (const auto& s : seqs) state_prune_insert(rebuilt, s);
          for (const auto& p : parts) state_prune_insert(rebuilt, p);
          sort_canonical(rebuilt);  // keeps the split priority deterministic
          seqs = std::move(rebuilt);
          changed = true;
        }
      }
    }
  }

  // Full minterms are exclusive history-wise; the economical extended form
  // is exclusive in the state reading (which is what its quantification
  // sums over).
  for (size_t i = 0; i < seqs.size(); ++i)
    for (size_t j = i + 1; j < seqs.size(); ++j) {
      bool ok = opts.mode == RewriteMode::kFull ? seqs_disjoint(seqs[i], seqs[j], opts.mode)
                                                : state_disjoint(seqs[i], seqs[j], opts.mode);
      if (!ok) throw std::runtime_error("disjointify: result not pairwise disjoint");
    }

  Tdnf out;
  out.seqs = std::move(seqs);
  sort_canonical(out.seqs);
  out.minimal = true;
  out.disjoint = true;
  out.rank_cutoff_hit = m.rank_cutoff_hit;
  return out;
}

CoverageCount coverage(const Sequence& seq) {
  if (seq.has_sand())
    throw std::invalid_argument("coverage counting does not admit SAND core items");
  CoverageCount cc;
  int pos = 1;  // position counting all events to the left, starting at 1
  for (const auto& c : seq.chain) {
    int r = static_cast<int>(c.events.size());
    if (c.kind == CoreKind::kLoose && r >= 2) {
      ++cc.w;
      int k = pos;
      // C((k-1)+(r-1), k-1) * r!
      long long binom = 1;
      for (int jj = 1; jj <= k - 1; ++jj)
        binom = binom * ((k - 1) + (r - 1) - (k - 1) + jj) / jj;
      long long fact = 1;
      for (int jj = 2; jj <= r; ++jj) fact *= jj;
      cc.per_core.push_back(binom * fact);
      cc.total *= binom * fact;
    }
    pos += r;
  }
  return cc;
}

std::vector<Sequence> expand_extended(const Sequence& seq) {
  // Enumerate all arrangements of the chain items (SAND cores stay whole,
  // extended cores dissolve into single events) and keep those consistent
  // with the sequence.
  struct Item {
    Core core;
  };
  std::vector<Core> items;
  for (const auto& c : seq.chain) {
    if (c.kind == CoreKind::kLoose) {
      for (const auto& e : c.events) items.push_back(Core{CoreKind::kSim, {e}});
    } else {
      items.push_back(c);
    }
  }
  std::sort(items.begin(), items.end(),
            [](const Core& a, const Core& b) { return a.events < b.events; });
  ExprPtr se = to_expr(Sequence{{}, seq.chain});
  std::vector<EventId> ev = seq.chain_events();
  std::vector<Sequence> out;
  do {
    std::vector<double> times(ev.size());
    double t = 0;
    for (const auto& it : items) {
      t += 1;
      for (const auto& e : it.events)
        times[std::find(ev.begin(), ev.end(), e) - ev.begin()] = t;
    }
    if (eval_first_true(se, ev, times) < std::numeric_limits<double>::infinity()) {
      Sequence s;
      s.guard = seq.guard;
      for (const auto& it : items) s.chain.push_back(it);
      out.push_back(std::move(s));
    }
  } while (std::next_permutation(items.begin(), items.end(), [](const Core& a, const Core& b) {
    return a.events < b.events;
  }));
  sort_canonical(out);
  return out;
}

}  // namespace tfta
