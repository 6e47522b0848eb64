/// @file rewrite.cpp
/// Terminating rewrite system for temporal expressions.
///
/// Internally everything is an OR-list of guarded sequences (units).  The
/// conjunction of two units goes through the law of completion; PAND/SAND
/// joins recurse on chain prefixes, and guards travel as deadlines that are
/// either promoted to the end of the combined chain, discharged by a later
/// occurrence, or woven into the chain as explicit interleavings.  All of
/// the published transformation laws fall out of these few primitives.
#include "tfta/rewrite.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "tfta/seq_tree.hpp"

namespace tfta {

void RewriteTrace::record(const char* law, const std::string& before, const std::string& after) {
  if (capture && steps.size() < capture_limit) steps.push_back({law, before, after});
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<EventId> sorted_unique(std::vector<EventId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string seq_key(const Sequence& s) {
  std::string k;
  for (const auto& g : s.guard) {
    k += '!';
    k += g;
    k += ',';
  }
  for (const auto& c : s.chain) {
    k += c.kind == CoreKind::kSim ? '(' : '[';
    for (const auto& e : c.events) {
      k += e;
      k += ',';
    }
    k += ';';
  }
  return k;
}

// --- exact cover test ------------------------------------------------------

// All ordered set partitions of `events` (blocks are simultaneous groups).
void enumerate_osp(const std::vector<EventId>& events,
                   std::vector<std::vector<std::vector<EventId>>>& out) {
  if (events.empty()) {
    out.push_back({});
    return;
  }
  size_t n = events.size();
  std::vector<std::vector<EventId>> blocks;
  std::vector<size_t> unused(n);
  for (size_t i = 0; i < n; ++i) unused[i] = i;
  std::function<void()> rec = [&]() {
    if (unused.empty()) {
      out.push_back(blocks);
      return;
    }
    // The next block is any nonempty subset of the remaining events.
    std::vector<size_t> pool = unused;
    size_t m = pool.size();
    for (size_t mask = 1; mask < (size_t{1} << m); ++mask) {
      std::vector<EventId> block;
      std::vector<size_t> rest;
      for (size_t b = 0; b < m; ++b) {
        if (mask & (size_t{1} << b))
          block.push_back(events[pool[b]]);
        else
          rest.push_back(pool[b]);
      }
      blocks.push_back(std::move(block));
      unused = rest;
      rec();
      blocks.pop_back();
      unused = pool;
    }
  };
  rec();
}

struct Ordering {
  std::vector<EventId> order;   // event list
  std::vector<double> times;    // instant per event
};

// Minimal failure histories of a sequence: the orderings of exactly its
// chain events that realize the chain.  Cached per sequence.
const std::vector<Ordering>& minimal_orderings(const Sequence& s) {
  thread_local std::unordered_map<std::string, std::vector<Ordering>> cache;
  std::string key = seq_key(s);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<EventId> ev = s.chain_events();
  std::vector<std::vector<std::vector<EventId>>> osps;
  enumerate_osp(ev, osps);
  ExprPtr se = to_expr(Sequence{{}, s.chain});  // guards play no role here
  std::vector<Ordering> out;
  for (const auto& blocks : osps) {
    Ordering o;
    o.order = ev;
    o.times.assign(ev.size(), kInf);
    double t = 0;
    for (const auto& block : blocks) {
      t += 1;
      for (const auto& e : block)
        o.times[std::find(ev.begin(), ev.end(), e) - ev.begin()] = t;
    }
    if (eval_first_true(se, o.order, o.times) < kInf) out.push_back(std::move(o));
  }
  return cache.emplace(std::move(key), std::move(out)).first->second;
}

}  // namespace

bool sequence_covers(const Sequence& u, const Sequence& v) {
  if (u.is_true()) return true;
  if (v.is_true()) return false;
  thread_local std::unordered_map<std::string, bool> cache;
  std::string key = seq_key(u) + "|" + seq_key(v);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  bool result = true;
  auto ev_u = u.chain_events();
  auto ev_v = v.chain_events();
  if (!std::includes(ev_v.begin(), ev_v.end(), ev_u.begin(), ev_u.end())) {
    result = false;
  } else {
    for (const auto& g : u.guard) {
      if (!std::binary_search(v.guard.begin(), v.guard.end(), g) &&
          !std::binary_search(ev_v.begin(), ev_v.end(), g)) {
        result = false;
        break;
      }
    }
  }
  if (result) {
    ExprPtr ue = to_expr(u);
    // Guard events of u that live only in v's guard never occur along v's
    // minimal histories; extend the ordering with them at infinity.
    std::vector<EventId> extra;
    for (const auto& g : u.guard)
      if (!std::binary_search(ev_v.begin(), ev_v.end(), g)) extra.push_back(g);
    for (const auto& o : minimal_orderings(v)) {
      Ordering ext = o;
      for (const auto& g : extra) {
        ext.order.push_back(g);
        ext.times.push_back(kInf);
      }
      if (eval_first_true(ue, ext.order, ext.times) == kInf) {
        result = false;
        break;
      }
    }
  }
  cache.emplace(std::move(key), result);
  return result;
}

namespace {

// ---------------------------------------------------------------------------

struct ExprHash {
  size_t operator()(const ExprPtr& e) const { return e->hash(); }
};
struct ExprEq {
  bool operator()(const ExprPtr& a, const ExprPtr& b) const { return equal(a, b); }
};

class Engine {
 public:
  Engine(const RewriteOptions& opts, RewriteTrace* trace) : opts_(opts), trace_(trace) {}

  std::vector<Sequence> to_units(const ExprPtr& e);

  bool cutoff_hit() const { return cutoff_hit_; }

  // --- unit algebra --------------------------------------------------------

  void tick() {
    if (++applied_ > opts_.budget)
      throw BudgetExceeded("rewrite budget exceeded (" + std::to_string(opts_.budget) + " steps)");
    if (trace_) trace_->applied = applied_;
  }

  std::vector<Sequence> normalize(std::vector<Core> cores, std::vector<EventId> end_guard,
                                  std::vector<EventId> inner_guard);
  std::vector<Sequence> conj_units(const Sequence& a, const Sequence& b);
  std::vector<Sequence> pand_join(const Sequence& a, const Sequence& b);
  std::vector<Sequence> sand_join(const Sequence& a, const Sequence& b);
  std::vector<Sequence> dmd(const std::vector<Sequence>& units);
  std::vector<Sequence> split_last_loose(const Sequence& s);
  bool units_disjoint(const Sequence& a, const Sequence& b);

  void or_insert(std::vector<Sequence>& acc, const Sequence& s) {
    for (const auto& e : acc)
      if (sequence_covers(e, s)) return;
    std::erase_if(acc, [&](const Sequence& e) { return sequence_covers(s, e); });
    acc.push_back(s);
  }
  void or_merge(std::vector<Sequence>& acc, const std::vector<Sequence>& add) {
    for (const auto& s : add) or_insert(acc, s);
  }

  void record(const char* law, const std::string& before, const std::vector<Sequence>& after) {
    if (trace_ && trace_->capture) {
      Tdnf t;
      t.seqs = after;
      trace_->record(law, before, to_string(t));
    }
  }

 private:
  struct Product {
    std::vector<EventId> guards;
    std::vector<ExprPtr> pos;
    std::vector<ExprPtr> neg_composite;
  };

  std::vector<Product> bool_dnf(const ExprPtr& e);
  std::vector<Sequence> units_of_literal(const ExprPtr& lit);
  std::vector<Sequence> conj_lists(const std::vector<Sequence>& a, const std::vector<Sequence>& b);

  RewriteOptions opts_;
  RewriteTrace* trace_;
  uint64_t applied_ = 0;
  bool cutoff_hit_ = false;
  std::unordered_map<ExprPtr, std::vector<Sequence>, ExprHash, ExprEq> unit_memo_;
  std::map<std::pair<std::string, std::string>, std::vector<Sequence>> conj_memo_;
  std::map<std::pair<std::string, std::string>, bool> disjoint_memo_;
};

std::vector<Sequence> Engine::normalize(std::vector<Core> cores, std::vector<EventId> end_guard,
                                        std::vector<EventId> inner_guard) {
  tick();
  // Contradiction / extended-intersection sweep: an event anchored at two
  // instants is False, but a later extended core simply absorbs it.
  for (bool changed = true; changed;) {
    changed = false;
    std::map<EventId, size_t> seen;
    for (size_t i = 0; i < cores.size() && !changed; ++i) {
      for (const auto& ev : cores[i].events) {
        auto it = seen.find(ev);
        if (it == seen.end()) {
          seen.emplace(ev, i);
          continue;
        }
        if (cores[i].kind == CoreKind::kLoose) {
          auto& evs = cores[i].events;
          evs.erase(std::find(evs.begin(), evs.end(), ev));
          if (evs.empty()) return {};  // its instant would already have passed
          changed = true;
          break;
        }
        return {};  // law of contradiction
      }
    }
  }
  for (auto& c : cores)
    if (c.events.size() == 1) c.kind = CoreKind::kSim;

  // Interior guard group (anchored at the second-to-last core).
  if (!inner_guard.empty() && cores.empty()) inner_guard.clear();  // guards on True are vacuous
  if (!inner_guard.empty() && cores.size() == 1) {
    // Scope collapses to the chain end.
    end_guard.insert(end_guard.end(), inner_guard.begin(), inner_guard.end());
    inner_guard.clear();
  }
  if (!inner_guard.empty()) {
    size_t p = cores.size() - 2;
    std::vector<EventId> group;
    for (const auto& x : sorted_unique(inner_guard)) {
      bool early = false, at_last = false;
      for (size_t i = 0; i <= p && !early; ++i)
        early = std::binary_search(cores[i].events.begin(), cores[i].events.end(), x);
      if (early) return {};  // !x & (..x..< last) = false
      at_last = std::binary_search(cores.back().events.begin(), cores.back().events.end(), x);
      if (at_last && cores.back().kind == CoreKind::kLoose)
        throw std::runtime_error("internal: guard into an extended final core");
      if (!at_last) group.push_back(x);  // a later occurrence discharges the guard
    }
    if (group.empty()) return normalize(std::move(cores), std::move(end_guard), {});

    std::vector<Sequence> out;
    size_t m = group.size();
    std::vector<Core> head(cores.begin(), cores.begin() + p + 1);
    Core last = cores.back();
    // Place every guarded event: after the chain end (stays a guard),
    // strictly between the two final instants, or simultaneous with the end.
    for (size_t merge_mask = 0; merge_mask < (size_t{1} << m); ++merge_mask) {
      std::vector<EventId> merged, rest;
      for (size_t b = 0; b < m; ++b)
        (merge_mask & (size_t{1} << b) ? merged : rest).push_back(group[b]);
      size_t r = rest.size();
      for (size_t between_mask = 0; between_mask < (size_t{1} << r); ++between_mask) {
        std::vector<EventId> between, promoted = end_guard;
        for (size_t b = 0; b < r; ++b)
          (between_mask & (size_t{1} << b) ? between : promoted).push_back(rest[b]);
        std::vector<std::vector<std::vector<EventId>>> osps;
        enumerate_osp(between, osps);
        for (const auto& blocks : osps) {
          std::vector<Core> mid = head;
          for (const auto& blk : blocks) {
            Core c;
            c.kind = CoreKind::kSim;
            c.events = sorted_unique(blk);
            mid.push_back(std::move(c));
          }
          if (merged.empty()) {
            auto chain = mid;
            chain.push_back(last);
            auto sub = normalize(std::move(chain), promoted, {});
            out.insert(out.end(), sub.begin(), sub.end());
          } else if (last.kind == CoreKind::kSim) {
            Core nl;
            nl.kind = CoreKind::kSim;
            nl.events = last.events;
            nl.events.insert(nl.events.end(), merged.begin(), merged.end());
            nl.events = sorted_unique(nl.events);
            auto chain = mid;
            chain.push_back(std::move(nl));
            auto sub = normalize(std::move(chain), promoted, {});
            out.insert(out.end(), sub.begin(), sub.end());
          } else {
            // Simultaneity with the completion of an extended core: split
            // the core by its final instant group.
            const auto& K = last.events;
            size_t kk = K.size();
            for (size_t t_mask = 1; t_mask < (size_t{1} << kk); ++t_mask) {
              std::vector<EventId> T, restK;
              for (size_t b = 0; b < kk; ++b)
                (t_mask & (size_t{1} << b) ? T : restK).push_back(K[b]);
              Core nl;
              nl.kind = CoreKind::kSim;
              nl.events = sorted_unique([&] {
                auto v = T;
                v.insert(v.end(), merged.begin(), merged.end());
                return v;
              }());
              std::vector<Sequence> prefixes;
              Sequence pre{{}, mid};
              if (restK.empty()) {
                prefixes = {pre};
              } else {
                Core rc;
                rc.kind = restK.size() > 1 ? CoreKind::kLoose : CoreKind::kSim;
                rc.events = sorted_unique(restK);
                prefixes = conj_units(pre, Sequence{{}, {rc}});
              }
              for (const auto& w : prefixes) {
                auto chain = w.chain;
                chain.push_back(nl);
                auto g = promoted;
                g.insert(g.end(), w.guard.begin(), w.guard.end());
                auto sub = normalize(std::move(chain), std::move(g), {});
                out.insert(out.end(), sub.begin(), sub.end());
              }
            }
          }
        }
      }
    }
    return out;
  }

  end_guard = sorted_unique(std::move(end_guard));
  for (const auto& x : end_guard)
    for (const auto& c : cores)
      if (std::binary_search(c.events.begin(), c.events.end(), x)) return {};

  Sequence s{std::move(end_guard), std::move(cores)};
  if (opts_.rank_cutoff && s.rank() > *opts_.rank_cutoff) {
    cutoff_hit_ = true;
    return {};
  }
  if (opts_.drop_sand && s.has_sand()) return {};
  return {std::move(s)};
}

std::vector<Sequence> Engine::pand_join(const Sequence& a, const Sequence& b) {
  if (b.is_true()) return {};            // x < true = false (also true < true)
  if (a.is_true()) return {b};           // true < x = x
  // A guard of the left operand that names a member of the right operand's
  // final extended core is not simply discharged: that member may occur at
  // any instant up to the core's completion.  Separate the core by its
  // final instant first.
  if (b.chain.back().kind == CoreKind::kLoose) {
    bool clash = false;
    for (const auto& g : a.guard)
      clash = clash || std::binary_search(b.chain.back().events.begin(),
                                          b.chain.back().events.end(), g);
    if (clash) {
      std::vector<Sequence> out;
      for (const auto& b2 : split_last_loose(b)) {
        auto sub = pand_join(a, b2);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
  }
  // Rank lower bound: the conjunction anchors all events of both chains.
  if (opts_.rank_cutoff) {
    auto ea = a.chain_events(), eb = b.chain_events();
    std::vector<EventId> un;
    std::set_union(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(un));
    if (static_cast<int>(un.size()) > *opts_.rank_cutoff) {
      cutoff_hit_ = true;
      return {};
    }
  }
  Sequence prefix{{}, std::vector<Core>(b.chain.begin(), b.chain.end() - 1)};
  std::vector<Sequence> out;
  for (const auto& w : conj_units(a, prefix)) {
    auto chain = w.chain;
    chain.push_back(b.chain.back());
    auto sub = normalize(std::move(chain), b.guard, w.guard);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::vector<Sequence> Engine::sand_join(const Sequence& a, const Sequence& b) {
  if (a.is_true() && b.is_true()) return {Sequence{}};  // true = true = true
  if (a.is_true() || b.is_true()) return {};            // x = true = false
  // Split extended final cores by their last instant group first.
  for (const Sequence* s : {&a, &b}) {
    if (s->chain.back().kind != CoreKind::kLoose) continue;
    const auto& K = s->chain.back().events;
    Sequence pre{{}, std::vector<Core>(s->chain.begin(), s->chain.end() - 1)};
    std::vector<Sequence> out;
    size_t kk = K.size();
    for (size_t t_mask = 1; t_mask < (size_t{1} << kk); ++t_mask) {
      std::vector<EventId> T, rest;
      for (size_t bb = 0; bb < kk; ++bb)
        (t_mask & (size_t{1} << bb) ? T : rest).push_back(K[bb]);
      std::vector<Sequence> prefixes;
      if (rest.empty()) {
        prefixes = {pre};
      } else {
        Core rc;
        rc.kind = rest.size() > 1 ? CoreKind::kLoose : CoreKind::kSim;
        rc.events = sorted_unique(rest);
        prefixes = conj_units(pre, Sequence{{}, {rc}});
      }
      for (const auto& w : prefixes) {
        Core t_core;
        t_core.kind = CoreKind::kSim;
        t_core.events = sorted_unique(T);
        Sequence alt;
        alt.guard = sorted_unique([&] {
          auto g = s->guard;
          g.insert(g.end(), w.guard.begin(), w.guard.end());
          return g;
        }());
        alt.chain = w.chain;
        alt.chain.push_back(t_core);
        auto sub = (s == &a) ? sand_join(alt, b) : sand_join(a, alt);
        out.insert(out.end(), sub.begin(), sub.end());
      }
    }
    return out;
  }
  Core merged;
  merged.kind = CoreKind::kSim;
  merged.events = a.chain.back().events;
  merged.events.insert(merged.events.end(), b.chain.back().events.begin(),
                       b.chain.back().events.end());
  merged.events = sorted_unique(merged.events);
  Sequence pa{{}, std::vector<Core>(a.chain.begin(), a.chain.end() - 1)};
  Sequence pb{{}, std::vector<Core>(b.chain.begin(), b.chain.end() - 1)};
  std::vector<Sequence> out;
  for (const auto& w : conj_units(pa, pb)) {
    auto chain = w.chain;
    chain.push_back(merged);
    std::vector<EventId> g = a.guard;
    g.insert(g.end(), b.guard.begin(), b.guard.end());
    auto sub = normalize(std::move(chain), std::move(g), w.guard);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::vector<Sequence> Engine::conj_units(const Sequence& a, const Sequence& b) {
  if (a.is_true()) return {b};
  if (b.is_true()) return {a};
  if (a == b) return {a};
  // Temporal law for intersections: the more specific sequence wins.
  if (sequence_covers(a, b)) return {b};
  if (sequence_covers(b, a)) return {a};
  std::string ka = seq_key(a), kb = seq_key(b);
  if (kb < ka) ka.swap(kb);
  std::pair<std::string, std::string> key{std::move(ka), std::move(kb)};
  if (auto it = conj_memo_.find(key); it != conj_memo_.end()) return it->second;

  std::vector<Sequence> res;
  // Extended-TDNF shortcut: coprime conjunctions of plain event groups stay
  // intact as one extended core event instead of going through completion.
  bool mergeable = opts_.mode == RewriteMode::kExtended && a.guard.empty() && b.guard.empty() &&
                   a.chain.size() == 1 && b.chain.size() == 1 && !a.has_sand() && !b.has_sand();
  if (mergeable) {
    Core c;
    c.events = a.chain[0].events;
    c.events.insert(c.events.end(), b.chain[0].events.begin(), b.chain[0].events.end());
    c.events = sorted_unique(c.events);
    c.kind = c.events.size() > 1 ? CoreKind::kLoose : CoreKind::kSim;
    res = normalize({c}, {}, {});
    record("boolean-merge", to_string(to_expr(a)) + " & " + to_string(to_expr(b)), res);
  } else {
    tick();
    for (const auto& s : pand_join(a, b)) or_insert(res, s);
    for (const auto& s : sand_join(a, b)) or_insert(res, s);
    for (const auto& s : pand_join(b, a)) or_insert(res, s);
    record("completion", to_string(to_expr(a)) + " & " + to_string(to_expr(b)), res);
  }
  conj_memo_.emplace(key, res);
  return res;
}

bool Engine::units_disjoint(const Sequence& a, const Sequence& b) {
  std::string ka = seq_key(a), kb = seq_key(b);
  if (kb < ka) ka.swap(kb);
  std::pair<std::string, std::string> key{std::move(ka), std::move(kb)};
  if (auto it = disjoint_memo_.find(key); it != disjoint_memo_.end()) return it->second;
  // The cutoff must not blind the disjointness probe.
  auto saved = opts_.rank_cutoff;
  opts_.rank_cutoff.reset();
  bool d = conj_units(a, b).empty();
  opts_.rank_cutoff = saved;
  disjoint_memo_.emplace(key, d);
  return d;
}

// Break the last extended core of a sequence apart by its final instant
// group; the remaining members join the part of the chain before it.
std::vector<Sequence> Engine::split_last_loose(const Sequence& s) {
  size_t idx = s.chain.size();
  for (size_t c = s.chain.size(); c-- > 0;)
    if (s.chain[c].kind == CoreKind::kLoose) {
      idx = c;
      break;
    }
  if (idx == s.chain.size()) return {s};
  const auto& K = s.chain[idx].events;
  std::vector<Sequence> out;
  size_t kk = K.size();
  for (size_t t_mask = 1; t_mask < (size_t{1} << kk); ++t_mask) {
    std::vector<EventId> T, rest;
    for (size_t b = 0; b < kk; ++b) (t_mask & (size_t{1} << b) ? T : rest).push_back(K[b]);
    Sequence prefix{{}, std::vector<Core>(s.chain.begin(), s.chain.begin() + idx)};
    std::vector<Sequence> heads;
    if (rest.empty()) {
      heads = {prefix};
    } else {
      Core rc;
      rc.kind = rest.size() > 1 ? CoreKind::kLoose : CoreKind::kSim;
      rc.events = sorted_unique(rest);
      heads = conj_units(prefix, Sequence{{}, {rc}});
    }
    Core tc;
    tc.kind = CoreKind::kSim;
    tc.events = sorted_unique(T);
    for (const auto& h : heads) {
      auto cores = h.chain;
      cores.push_back(tc);
      cores.insert(cores.end(), s.chain.begin() + idx + 1, s.chain.end());
      auto g = s.guard;
      g.insert(g.end(), h.guard.begin(), h.guard.end());
      auto sub = normalize(std::move(cores), std::move(g), {});
      out.insert(out.end(), sub.begin(), sub.end());
    }
  }
  return out;
}

std::vector<Sequence> Engine::dmd(const std::vector<Sequence>& units) {
  // First-occurrence decomposition of an OR-operand: each piece may become
  // true only at the instant the whole disjunction first becomes true.
  // Then a < (d1 | d2 | ...) distributes into the pieces, per the temporal
  // distributive laws.  A piece that can still fire strictly after another
  // is split on a discriminating event: the event stays out until the piece
  // completes (guard), joins its completion instant, or occurs strictly
  // before it.  Appending it after the completion is what the guard branch
  // already covers.
  std::vector<Sequence> acc;
  for (const auto& u : units) or_insert(acc, u);

  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < acc.size() && !changed; ++i) {
      for (size_t j = 0; j < acc.size() && !changed; ++j) {
        if (i == j) continue;
        // Can acc[j] fire strictly after acc[i]?  The probe must not be
        // blinded by the rank cutoff.
        auto saved_cutoff = opts_.rank_cutoff;
        opts_.rank_cutoff.reset();
        bool late = !pand_join(acc[i], acc[j]).empty();
        opts_.rank_cutoff = saved_cutoff;
        if (!late) continue;
        tick();
        auto chain_i = acc[i].chain_events();
        auto sup_j = acc[j].chain_events();
        sup_j.insert(sup_j.end(), acc[j].guard.begin(), acc[j].guard.end());
        std::sort(sup_j.begin(), sup_j.end());
        std::vector<EventId> cand;
        std::set_difference(chain_i.begin(), chain_i.end(), sup_j.begin(), sup_j.end(),
                            std::back_inserter(cand));
        if (cand.empty())
          std::set_difference(acc[i].guard.begin(), acc[i].guard.end(), sup_j.begin(),
                              sup_j.end(), std::back_inserter(cand));
        std::vector<Sequence> parts;
        Sequence target = acc[j];
        if (!cand.empty()) {
          const EventId& x = cand.front();
          auto g = target.guard;
          g.push_back(x);
          auto neg = normalize(target.chain, std::move(g), {});
          parts.insert(parts.end(), neg.begin(), neg.end());
          Core xc;
          xc.kind = CoreKind::kSim;
          xc.events = {x};
          Sequence xu{{}, {xc}};
          auto sim = sand_join(xu, target);
          parts.insert(parts.end(), sim.begin(), sim.end());
          auto before = pand_join(xu, target);
          parts.insert(parts.end(), before.begin(), before.end());
        } else if (target.has_loose()) {
          // Order-based overlap: separate by the final instant of the
          // extended core so the earlier-firing piece can absorb its share.
          parts = split_last_loose(target);
        } else if (acc[i].has_loose()) {
          parts = {target};
          target = acc[i];
          acc[i] = acc[j];
          parts = split_last_loose(target);
          acc.erase(acc.begin() + j);
          std::vector<Sequence> rebuilt0;
          for (const auto& s : acc) or_insert(rebuilt0, s);
          for (const auto& p : parts) or_insert(rebuilt0, p);
          acc = std::move(rebuilt0);
          changed = true;
          continue;
        } else {
          throw std::runtime_error(
              "internal: cannot separate OR-operand pieces: [" +
              to_string(to_expr(acc[i])) + "] vs [" + to_string(to_expr(acc[j])) + "]");
        }
        acc.erase(acc.begin() + j);

        std::vector<Sequence> rebuilt;
        for (const auto& s : acc) or_insert(rebuilt, s);
        for (const auto& p : parts) or_insert(rebuilt, p);
        acc = std::move(rebuilt);
        changed = true;
      }
    }
  }
  record("or-decomposition", to_string(Tdnf{units}), acc);
  return acc;
}

std::vector<Engine::Product> Engine::bool_dnf(const ExprPtr& e) {
  switch (e->op()) {
    case Op::kFalse:
      return {};
    case Op::kTrue:
      return {Product{}};
    case Op::kAtom:
    case Op::kPand:
    case Op::kSand:
      return {Product{{}, {e}, {}}};
    case Op::kNot: {
      const ExprPtr& inner = e->kids()[0];
      if (inner->op() == Op::kAtom) return {Product{{inner->atom()}, {}, {}}};
      return {Product{{}, {}, {inner}}};
    }
    case Op::kOr: {
      std::vector<Product> out;
      for (const auto& k : e->kids()) {
        auto sub = bool_dnf(k);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    case Op::kAnd: {
      std::vector<Product> out{Product{}};
      for (const auto& k : e->kids()) {
        // A nested conjunction that carries its own negations is a closed
        // scope (the guards hold until *its* completion, not the whole
        // product's); keep it opaque.
        std::vector<Product> sub;
        bool guarded_group = false;
        if (k->op() == Op::kAnd) {
          for (const auto& kk : k->kids()) guarded_group = guarded_group || kk->op() == Op::kNot;
        }
        if (guarded_group)
          sub = {Product{{}, {k}, {}}};
        else
          sub = bool_dnf(k);
        std::vector<Product> next;
        for (const auto& p : out) {
          for (const auto& q : sub) {
            Product r = p;
            r.guards.insert(r.guards.end(), q.guards.begin(), q.guards.end());
            for (const auto& lit : q.pos) {
              bool dup = false;
              for (const auto& have : r.pos) dup = dup || equal(have, lit);
              if (!dup) r.pos.push_back(lit);  // Boolean idempotency
            }
            r.neg_composite.insert(r.neg_composite.end(), q.neg_composite.begin(),
                                   q.neg_composite.end());
            next.push_back(std::move(r));
          }
        }
        out = std::move(next);
        tick();
      }
      return out;
    }
  }
  return {};
}

std::vector<Sequence> Engine::units_of_literal(const ExprPtr& lit) {
  switch (lit->op()) {
    case Op::kAnd: {
      // Guarded group: the negations scope over this conjunction only.
      std::vector<EventId> guards;
      std::vector<ExprPtr> positives;
      for (const auto& k : lit->kids()) {
        if (k->op() == Op::kNot) {
          if (k->kids()[0]->op() == Op::kAtom) {
            guards.push_back(k->kids()[0]->atom());
          } else {
            // Negated composite inside the group: expand it against the
            // rest of the group.
            std::vector<ExprPtr> rest;
            for (const auto& kk : lit->kids())
              if (kk.get() != k.get()) rest.push_back(kk);
            return to_units(negate_in_context(k->kids()[0], Expr::conj(std::move(rest))));
          }
        } else {
          positives.push_back(k);
        }
      }
      if (positives.empty())
        throw NonMonotoneError("negated term without a positive conjunct: " + to_string(lit));
      auto units = to_units(Expr::conj(std::move(positives)));
      std::vector<Sequence> out;
      for (const auto& u : units) {
        auto g = u.guard;
        g.insert(g.end(), guards.begin(), guards.end());
        for (auto& s : normalize(u.chain, std::move(g), {})) or_insert(out, s);
      }
      return out;
    }
    case Op::kAtom: {
      Core c;
      c.kind = CoreKind::kSim;
      c.events = {lit->atom()};
      return {Sequence{{}, {c}}};
    }
    case Op::kPand: {
      auto lhs = to_units(lit->kids()[0]);
      auto rhs = to_units(lit->kids()[1]);
      std::vector<Sequence> rhs_d = rhs;
      if (rhs.size() > 1) rhs_d = dmd(rhs);  // type I needs disjoint operands
      std::vector<Sequence> out;
      for (const auto& a : lhs) {  // type II distributes freely
        for (const auto& d : rhs_d) or_merge(out, pand_join(a, d));
      }
      record(rhs.size() > 1 ? "distributive-I/II" : "pand", to_string(lit), out);
      return out;
    }
    case Op::kSand: {
      std::vector<Sequence> cur = to_units(lit->kids()[0]);
      for (size_t i = 1; i < lit->kids().size(); ++i) {
        auto rhs = to_units(lit->kids()[i]);
        auto da = cur.size() > 1 ? dmd(cur) : cur;
        auto db = rhs.size() > 1 ? dmd(rhs) : rhs;
        std::vector<Sequence> out;
        for (const auto& a : da)
          for (const auto& b : db) or_merge(out, sand_join(a, b));
        cur = std::move(out);
      }
      record("sand-or", to_string(lit), cur);
      return cur;
    }
    default:
      return to_units(lit);
  }
}

std::vector<Sequence> Engine::conj_lists(const std::vector<Sequence>& a,
                                         const std::vector<Sequence>& b) {
  std::vector<Sequence> out;
  for (const auto& u : a)
    for (const auto& v : b) or_merge(out, conj_units(u, v));
  return out;
}

std::vector<Sequence> Engine::to_units(const ExprPtr& raw) {
  ExprPtr e = canonicalize(raw);
  if (auto it = unit_memo_.find(e); it != unit_memo_.end()) return it->second;

  auto products = bool_dnf(e);
  // Expand negated composites with the temporal laws of negation; the rest
  // of the product is the context they scope over.
  for (size_t i = 0; i < products.size();) {
    if (products[i].neg_composite.empty()) {
      ++i;
      continue;
    }
    Product p = products[i];
    products.erase(products.begin() + i);
    ExprPtr inner = p.neg_composite.back();
    p.neg_composite.pop_back();
    std::vector<ExprPtr> ctx_parts;
    for (const auto& g : p.guards) ctx_parts.push_back(Expr::negate(Expr::atom(g)));
    ctx_parts.insert(ctx_parts.end(), p.pos.begin(), p.pos.end());
    for (const auto& nc : p.neg_composite) ctx_parts.push_back(Expr::negate(nc));
    ExprPtr ctx = Expr::conj(std::move(ctx_parts));
    ExprPtr expanded = negate_in_context(inner, ctx);
    if (trace_) trace_->record("negation", "!(" + to_string(inner) + ") & " + to_string(ctx),
                               to_string(expanded));
    auto sub = bool_dnf(canonicalize(expanded));
    products.insert(products.end(), sub.begin(), sub.end());
    tick();
  }
  // Boolean absorption between products over opaque temporal literals.
  auto product_leq = [](const Product& p, const Product& q) {  // p covers q
    for (const auto& g : p.guards)
      if (std::find(q.guards.begin(), q.guards.end(), g) == q.guards.end()) return false;
    for (const auto& l : p.pos) {
      bool found = false;
      for (const auto& m : q.pos) found = found || equal(l, m);
      if (!found) return false;
    }
    return true;
  };
  std::vector<Product> kept;
  for (size_t i = 0; i < products.size(); ++i) {
    bool drop = false;
    for (size_t j = 0; j < products.size() && !drop; ++j) {
      if (i == j) continue;
      if (product_leq(products[j], products[i]) &&
          !(product_leq(products[i], products[j]) && j > i))
        drop = true;
    }
    if (!drop) kept.push_back(products[i]);
  }

  std::vector<Sequence> acc;
  for (const auto& p : kept) {
    if (p.pos.empty() && !p.guards.empty())
      throw NonMonotoneError("negated term without a positive conjunct: " + to_string(e));
    std::vector<Sequence> units{Sequence{}};
    for (const auto& lit : p.pos) units = conj_lists(units, units_of_literal(lit));
    for (const auto& u : units) {
      auto g = u.guard;
      g.insert(g.end(), p.guards.begin(), p.guards.end());
      for (auto& s : normalize(u.chain, std::move(g), {})) or_insert(acc, s);
    }
  }
  unit_memo_.emplace(e, acc);
  return acc;
}

}  // namespace

RewriteResult to_tdnf(const ExprPtr& e, const RewriteOptions& opts, bool capture_trace) {
  RewriteResult res;
  res.trace.capture = capture_trace;
  Engine eng(opts, &res.trace);
  auto units = eng.to_units(e);
  sort_canonical(units);
  res.tdnf.seqs = std::move(units);
  res.tdnf.rank_cutoff_hit = eng.cutoff_hit();
  return res;
}

Tdnf complete_and(const ExprPtr& a, const ExprPtr& b, RewriteMode mode) {
  if (canonicalize(a)->op() == Op::kNot || canonicalize(b)->op() == Op::kNot)
    throw std::invalid_argument("law of completion must not be used on negated operands");
  RewriteOptions opts;
  opts.mode = mode;
  // Completion itself always separates the operands.
  ExprPtr e = Expr::disj({Expr::pand(a, b), Expr::sand({a, b}), Expr::pand(b, a)});
  return to_tdnf(e, opts).tdnf;
}

ExprPtr contradiction(const ExprPtr& e) {
  RewriteOptions opts;
  opts.mode = RewriteMode::kExtended;
  auto t = to_tdnf(e, opts).tdnf;
  return canonicalize(to_expr(t));
}

ExprPtr pand_assoc(const ExprPtr& e, RewriteMode mode) {
  ExprPtr c = canonicalize(e);
  if (c->op() != Op::kPand || c->kids()[1]->op() != Op::kPand)
    throw std::invalid_argument("pand_assoc expects a < (b < c)");
  const ExprPtr& a = c->kids()[0];
  const ExprPtr& b = c->kids()[1]->kids()[0];
  const ExprPtr& cc = c->kids()[1]->kids()[1];
  ExprPtr r = Expr::pand(Expr::conj({a, b}), cc);
  RewriteOptions opts;
  opts.mode = mode;
  return canonicalize(to_expr(to_tdnf(r, opts).tdnf));
}

ExprPtr sand_over_pand(const ExprPtr& e, RewriteMode mode) {
  ExprPtr c = canonicalize(e);
  if (c->op() != Op::kSand || c->kids().size() != 2)
    throw std::invalid_argument("sand_over_pand expects a = (b < c)");
  ExprPtr a = c->kids()[0], p = c->kids()[1];
  if (p->op() != Op::kPand) std::swap(a, p);
  if (p->op() != Op::kPand) throw std::invalid_argument("sand_over_pand expects a = (b < c)");
  ExprPtr r = Expr::pand(p->kids()[0], Expr::sand({a, p->kids()[1]}));
  RewriteOptions opts;
  opts.mode = mode;
  return canonicalize(to_expr(to_tdnf(r, opts).tdnf));
}

Tdnf distribute_pand_right(const ExprPtr& a, const std::vector<ExprPtr>& ors, RewriteMode mode) {
  RewriteOptions opts;
  opts.mode = mode;
  std::vector<ExprPtr> kids = ors;
  return to_tdnf(Expr::pand(a, Expr::disj(std::move(kids))), opts).tdnf;
}

Tdnf distribute_pand_left(const std::vector<ExprPtr>& ors, const ExprPtr& c, RewriteMode mode) {
  RewriteOptions opts;
  opts.mode = mode;
  std::vector<ExprPtr> kids = ors;
  return to_tdnf(Expr::pand(Expr::disj(std::move(kids)), c), opts).tdnf;
}

Tdnf distribute_sand_or(const ExprPtr& a, const std::vector<ExprPtr>& ors, RewriteMode mode) {
  RewriteOptions opts;
  opts.mode = mode;
  std::vector<ExprPtr> kids = ors;
  return to_tdnf(Expr::sand({a, Expr::disj(std::move(kids))}), opts).tdnf;
}

ExprPtr negate_in_context(const ExprPtr& raw, const ExprPtr& ctx) {
  ExprPtr inner = canonicalize(raw);
  switch (inner->op()) {
    case Op::kTrue:
      return Expr::make_false();
    case Op::kFalse:
      return canonicalize(ctx);
    case Op::kNot:
      return canonicalize(Expr::conj({inner->kids()[0], ctx}));
    case Op::kAtom:
      return canonicalize(Expr::conj({Expr::negate(inner), ctx}));
    case Op::kAnd: {  // de Morgan
      for (const auto& k : inner->kids())
        if (k->op() == Op::kNot)
          throw NonMonotoneError("negation over an already-negated conjunction: " +
                                 to_string(inner));
      std::vector<ExprPtr> alts;
      for (const auto& k : inner->kids()) alts.push_back(Expr::negate(k));
      return canonicalize(Expr::conj({Expr::disj(std::move(alts)), ctx}));
    }
    case Op::kOr: {
      std::vector<ExprPtr> kids;
      for (const auto& k : inner->kids()) kids.push_back(Expr::negate(k));
      kids.push_back(ctx);
      return canonicalize(Expr::conj(std::move(kids)));
    }
    case Op::kPand:
    case Op::kSand: {
      // First/second temporal law of negation; n-ary SAND peels binarily.
      ExprPtr a, b;
      if (inner->op() == Op::kPand) {
        a = inner->kids()[0];
        b = inner->kids()[1];
      } else {
        a = inner->kids()[0];
        std::vector<ExprPtr> rest(inner->kids().begin() + 1, inner->kids().end());
        b = Expr::sand(std::move(rest));
      }
      std::vector<ExprPtr> alts;
      alts.push_back(Expr::conj({Expr::negate(a), Expr::conj({Expr::negate(b), ctx})}));
      alts.push_back(Expr::conj({Expr::negate(b), Expr::conj({a, ctx})}));
      alts.push_back(Expr::conj({Expr::negate(a), Expr::conj({b, ctx})}));
      if (inner->op() == Op::kPand) {
        alts.push_back(Expr::conj({Expr::pand(b, a), ctx}));
        alts.push_back(Expr::conj({Expr::sand({a, b}), ctx}));
      } else {
        alts.push_back(Expr::conj({Expr::pand(a, b), ctx}));
        alts.push_back(Expr::conj({Expr::pand(b, a), ctx}));
      }
      return canonicalize(Expr::disj(std::move(alts)));
    }
  }
  return canonicalize(Expr::conj({Expr::negate(inner), ctx}));
}

Tdnf push_negated(const std::set<EventId>& negs, const ExprPtr& e, RewriteMode mode) {
  std::vector<ExprPtr> kids;
  for (const auto& n : negs) kids.push_back(Expr::negate(Expr::atom(n)));
  kids.push_back(e);
  RewriteOptions opts;
  opts.mode = mode;
  return to_tdnf(Expr::conj(std::move(kids)), opts).tdnf;
}

ExprPtr const_fold(const ExprPtr& raw) {
  ExprPtr e = canonicalize(raw);  // Boolean constant rules live here
  std::function<ExprPtr(const ExprPtr&)> fold = [&](const ExprPtr& n) -> ExprPtr {
    std::vector<ExprPtr> kids;
    kids.reserve(n->kids().size());
    for (const auto& k : n->kids()) kids.push_back(fold(k));
    switch (n->op()) {
      case Op::kPand: {
        const ExprPtr& a = kids[0];
        const ExprPtr& b = kids[1];
        if (b->op() == Op::kTrue) return Expr::make_false();   // x < true = false
        if (b->op() == Op::kFalse) return Expr::make_false();  // x < false = false
        if (a->op() == Op::kFalse) return Expr::make_false();  // false < x = false
        if (a->op() == Op::kTrue) return b;                    // true < x = x
        return Expr::pand(a, b);
      }
      case Op::kSand: {
        bool all_true = true;
        std::vector<ExprPtr> rest;
        for (const auto& k : kids) {
          if (k->op() == Op::kFalse) return Expr::make_false();  // x = false = false
          if (k->op() == Op::kTrue) continue;
          all_true = false;
          rest.push_back(k);
        }
        if (all_true) return Expr::make_true();  // true = true = true
        if (rest.size() < kids.size()) return Expr::make_false();  // x = true = false
        return Expr::sand(std::move(rest));
      }
      case Op::kAnd:
        return canonicalize(Expr::conj(std::move(kids)));
      case Op::kOr:
        return canonicalize(Expr::disj(std::move(kids)));
      case Op::kNot:
        return canonicalize(Expr::negate(kids[0]));
      default:
        return n;
    }
  };
  return fold(e);
}

Tdnf absorb(const Tdnf& t) {
  Tdnf out;
  out.minimal = t.minimal;
  out.disjoint = t.disjoint;
  out.rank_cutoff_hit = t.rank_cutoff_hit;
  for (const auto& s : t.seqs) {
    bool covered = false;
    for (const auto& e : out.seqs)
      if (sequence_covers(e, s)) {
        covered = true;
        break;
      }
    if (covered) continue;
    std::erase_if(out.seqs, [&](const Sequence& e) { return sequence_covers(s, e); });
    out.seqs.push_back(s);
  }
  sort_canonical(out.seqs);
  return out;
}

std::vector<Sequence> conjoin_sequences(const Sequence& a, const Sequence& b,
                                        const RewriteOptions& opts) {
  RewriteTrace trace;
  Engine eng(opts, &trace);
  auto res = eng.conj_units(a, b);
  sort_canonical(res);
  return res;
}

}  // namespace tfta
