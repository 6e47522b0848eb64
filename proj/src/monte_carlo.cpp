/// @file monte_carlo.cpp
#include "tfta/monte_carlo.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace tfta {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Expression compiled to an index-based form for fast repeated evaluation.
struct Compiled {
  Op op;
  int atom_idx = -1;
  std::vector<Compiled> kids;

  double eval(const std::vector<double>& t) const {
    switch (op) {
      case Op::kFalse: return kInf;
      case Op::kTrue: return 0.0;
      case Op::kAtom: return t[atom_idx];
      case Op::kNot: return kids[0].eval(t) == kInf ? 0.0 : kInf;
      case Op::kOr: {
        double best = kInf;
        for (const auto& k : kids) best = std::min(best, k.eval(t));
        return best;
      }
      case Op::kAnd: {
        double m = 0.0;
        bool any_pos = false;
        for (const auto& k : kids) {
          if (k.op == Op::kNot) continue;
          any_pos = true;
          m = std::max(m, k.eval(t));
          if (m == kInf) return kInf;
        }
        if (!any_pos) {
          for (const auto& k : kids)
            if (k.eval(t) == kInf) return kInf;
          return 0.0;
        }
        for (const auto& k : kids) {
          if (k.op != Op::kNot) continue;
          if (k.kids[0].eval(t) <= m) return kInf;
        }
        return m;
      }
      case Op::kPand: {
        double ta = kids[0].eval(t);
        if (ta == kInf) return kInf;
        double tb = kids[1].eval(t);
        return ta < tb && tb < kInf ? tb : kInf;
      }
      case Op::kSand: {
        double v = kids[0].eval(t);
        if (v == kInf) return kInf;
        for (size_t i = 1; i < kids.size(); ++i)
          if (kids[i].eval(t) != v) return kInf;
        return v;
      }
    }
    return kInf;
  }
};

Compiled compile(const ExprPtr& e, const std::vector<EventId>& events) {
  Compiled c;
  c.op = e->op();
  if (e->op() == Op::kAtom) {
    c.atom_idx = static_cast<int>(
        std::find(events.begin(), events.end(), e->atom()) - events.begin());
  }
  for (const auto& k : e->kids()) c.kids.push_back(compile(k, events));
  return c;
}

}  // namespace

McResult monte_carlo_F(const BasicEvents& basics, const ExprPtr& raw, const McConfig& cfg) {
  ExprPtr e = canonicalize(raw);
  std::set<EventId> evset = events_of(e);
  std::vector<EventId> events(evset.begin(), evset.end());
  std::vector<double> lambdas;
  for (const auto& ev : events) {
    auto it = basics.find(ev);
    if (it == basics.end()) throw std::runtime_error("missing rate data for " + ev);
    lambdas.push_back(it->second.lambda);
  }
  Compiled prog = compile(e, events);

  constexpr uint64_t kBlocks = 64;
  uint64_t hits = 0;
  std::vector<double> t(events.size());
  for (uint64_t blk = 0; blk < kBlocks; ++blk) {
    uint64_t count = cfg.samples / kBlocks + (blk < cfg.samples % kBlocks ? 1 : 0);
    std::mt19937_64 rng(splitmix64(cfg.seed + blk));
    for (uint64_t s = 0; s < count; ++s) {
      for (size_t i = 0; i < events.size(); ++i) {
        if (lambdas[i] <= 0.0) {
          t[i] = kInf;
          rng();  // keep one draw per event for a stable stream layout
          continue;
        }
        // Inverse transform on (0,1]; the low bit is forced so u > 0.
        double u = static_cast<double>((rng() >> 11) | 1ull) * 0x1.0p-53;
        double ft = -std::log(u) / lambdas[i];
        t[i] = ft <= cfg.t_end ? ft : kInf;
      }
      if (prog.eval(t) < kInf) ++hits;
    }
  }
  McResult r;
  r.hits = hits;
  double n = static_cast<double>(cfg.samples);
  r.estimate = hits / n;
  r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / n);
  return r;
}

}  // namespace tfta
