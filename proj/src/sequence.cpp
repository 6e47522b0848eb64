/// @file sequence.cpp
#include "tfta/sequence.hpp"

#include <algorithm>
#include <sstream>

namespace tfta {

int Sequence::rank() const {
  int n = 0;
  for (const auto& c : chain) n += static_cast<int>(c.events.size());
  return n;
}

bool Sequence::has_sand() const {
  for (const auto& c : chain)
    if (c.kind == CoreKind::kSim && c.events.size() > 1) return true;
  return false;
}

bool Sequence::has_loose() const {
  for (const auto& c : chain)
    if (c.kind == CoreKind::kLoose) return true;
  return false;
}

std::vector<EventId> Sequence::chain_events() const {
  std::vector<EventId> out;
  for (const auto& c : chain) out.insert(out.end(), c.events.begin(), c.events.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

int compare_core(const Core& a, const Core& b) {
  if (a.events != b.events) return a.events < b.events ? -1 : 1;
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  return 0;
}

}  // namespace

int compare(const Sequence& a, const Sequence& b) {
  if (a.rank() != b.rank()) return a.rank() < b.rank() ? -1 : 1;
  size_t n = std::min(a.chain.size(), b.chain.size());
  for (size_t i = 0; i < n; ++i) {
    int c = compare_core(a.chain[i], b.chain[i]);
    if (c != 0) return c;
  }
  if (a.chain.size() != b.chain.size()) return a.chain.size() < b.chain.size() ? -1 : 1;
  if (a.guard != b.guard) return a.guard < b.guard ? -1 : 1;
  return 0;
}

ExprPtr to_expr(const Core& c) {
  std::vector<ExprPtr> atoms;
  atoms.reserve(c.events.size());
  for (const auto& e : c.events) atoms.push_back(Expr::atom(e));
  if (c.events.size() == 1) return atoms.front();
  return c.kind == CoreKind::kSim ? Expr::sand(std::move(atoms)) : Expr::conj(std::move(atoms));
}

ExprPtr to_expr(const Sequence& s) {
  ExprPtr chain;
  if (s.chain.empty()) {
    chain = Expr::make_true();
  } else {
    chain = to_expr(s.chain.front());
    for (size_t i = 1; i < s.chain.size(); ++i) chain = Expr::pand(chain, to_expr(s.chain[i]));
  }
  if (s.guard.empty()) return chain;
  std::vector<ExprPtr> kids;
  for (const auto& g : s.guard) kids.push_back(Expr::negate(Expr::atom(g)));
  kids.push_back(chain);
  return Expr::conj(std::move(kids));
}

ExprPtr to_expr(const Tdnf& t) {
  if (t.seqs.empty()) return Expr::make_false();
  std::vector<ExprPtr> kids;
  kids.reserve(t.seqs.size());
  for (const auto& s : t.seqs) kids.push_back(to_expr(s));
  return Expr::disj(std::move(kids));
}

std::string to_string(const Sequence& s) { return to_string(to_expr(s)); }

std::string to_string(const Tdnf& t) {
  if (t.seqs.empty()) return "false";
  std::ostringstream os;
  for (size_t i = 0; i < t.seqs.size(); ++i) {
    if (i) os << " | ";
    bool paren = t.seqs.size() > 1 && (t.seqs[i].chain.size() > 1 || !t.seqs[i].guard.empty() ||
                                       (t.seqs[i].chain.size() == 1 && !t.seqs[i].chain[0].single()));
    if (paren) os << '[';
    os << to_string(t.seqs[i]);
    if (paren) os << ']';
  }
  return os.str();
}

void sort_canonical(std::vector<Sequence>& seqs) {
  std::sort(seqs.begin(), seqs.end(),
            [](const Sequence& a, const Sequence& b) { return compare(a, b) < 0; });
  seqs.erase(std::unique(seqs.begin(), seqs.end()), seqs.end());
}

}  // namespace tfta
