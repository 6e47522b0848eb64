/// @file expr.cpp
#include "tfta/expr.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace tfta {

namespace {

size_t combine(size_t seed, size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

}  // namespace

Expr::Expr(Op op, EventId atom, std::vector<ExprPtr> kids)
    : op_(op), atom_(std::move(atom)), kids_(std::move(kids)) {
  size_t h = static_cast<size_t>(op_) * 0x100000001b3ull;
  h = combine(h, std::hash<std::string>{}(atom_));
  for (const auto& k : kids_) h = combine(h, k->hash());
  hash_ = h;
}

ExprPtr Expr::make_false() {
  static const ExprPtr f = std::make_shared<Expr>(Op::kFalse, "", std::vector<ExprPtr>{});
  return f;
}

ExprPtr Expr::make_true() {
  static const ExprPtr t = std::make_shared<Expr>(Op::kTrue, "", std::vector<ExprPtr>{});
  return t;
}

ExprPtr Expr::atom(EventId id) {
  return std::make_shared<Expr>(Op::kAtom, std::move(id), std::vector<ExprPtr>{});
}

ExprPtr Expr::negate(ExprPtr e) {
  return std::make_shared<Expr>(Op::kNot, "", std::vector<ExprPtr>{std::move(e)});
}

ExprPtr Expr::conj(std::vector<ExprPtr> kids) {
  if (kids.empty()) return make_true();
  if (kids.size() == 1) return kids.front();
  return std::make_shared<Expr>(Op::kAnd, "", std::move(kids));
}

ExprPtr Expr::disj(std::vector<ExprPtr> kids) {
  if (kids.empty()) return make_false();
  if (kids.size() == 1) return kids.front();
  return std::make_shared<Expr>(Op::kOr, "", std::move(kids));
}

ExprPtr Expr::pand(ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<Expr>(Op::kPand, "",
                                std::vector<ExprPtr>{std::move(lhs), std::move(rhs)});
}

ExprPtr Expr::pand_chain(const std::vector<ExprPtr>& kids) {
  if (kids.empty()) return make_true();
  ExprPtr acc = kids.front();
  for (size_t i = 1; i < kids.size(); ++i) acc = pand(acc, kids[i]);
  return acc;
}

ExprPtr Expr::sand(std::vector<ExprPtr> kids) {
  if (kids.empty()) return make_true();
  if (kids.size() == 1) return kids.front();
  return std::make_shared<Expr>(Op::kSand, "", std::move(kids));
}

int compare(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return 0;
  auto rank = [](const ExprPtr& e) {
    switch (e->op()) {
      case Op::kFalse: return 0;
      case Op::kTrue: return 1;
      case Op::kAtom: return 2;
      default: return 3 + static_cast<int>(e->op());
    }
  };
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  if (a->op() == Op::kAtom) {
    if (a->atom() != b->atom()) return a->atom() < b->atom() ? -1 : 1;
    return 0;
  }
  const auto& ka = a->kids();
  const auto& kb = b->kids();
  size_t n = std::min(ka.size(), kb.size());
  for (size_t i = 0; i < n; ++i) {
    int c = compare(ka[i], kb[i]);
    if (c != 0) return c;
  }
  if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
  return 0;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash() != b->hash()) return false;
  return compare(a, b) == 0;
}

namespace {

bool has_direct_not(const ExprPtr& e) {
  for (const auto& k : e->kids())
    if (k->op() == Op::kNot) return true;
  return false;
}

ExprPtr canon(const ExprPtr& e);

ExprPtr canon_nary(Op op, const std::vector<ExprPtr>& in) {
  std::vector<ExprPtr> kids;
  for (const auto& raw : in) {
    ExprPtr k = canon(raw);
    // Boolean constant rules at the connective level.
    if (op == Op::kAnd) {
      if (k->op() == Op::kFalse) return Expr::make_false();
      if (k->op() == Op::kTrue) continue;
      // Flatten nested conjunctions only when they carry no direct negation:
      // a negated conjunct scopes over its own conjunction and must not leak.
      if (k->op() == Op::kAnd && !has_direct_not(k)) {
        kids.insert(kids.end(), k->kids().begin(), k->kids().end());
        continue;
      }
    } else if (op == Op::kOr) {
      if (k->op() == Op::kTrue) return Expr::make_true();
      if (k->op() == Op::kFalse) continue;
      if (k->op() == Op::kOr) {
        kids.insert(kids.end(), k->kids().begin(), k->kids().end());
        continue;
      }
    } else {  // Sand
      if (k->op() == Op::kSand) {
        kids.insert(kids.end(), k->kids().begin(), k->kids().end());
        continue;
      }
    }
    kids.push_back(k);
  }
  std::sort(kids.begin(), kids.end(), ExprPtrLess{});
  // Idempotency for And/Or/Sand at the syntactic level.
  kids.erase(std::unique(kids.begin(), kids.end(),
                         [](const ExprPtr& a, const ExprPtr& b) { return equal(a, b); }),
             kids.end());
  if (op == Op::kAnd) return Expr::conj(std::move(kids));
  if (op == Op::kOr) return Expr::disj(std::move(kids));
  // Sand of a single operand is the operand itself (A = A).
  return Expr::sand(std::move(kids));
}

ExprPtr canon(const ExprPtr& e) {
  switch (e->op()) {
    case Op::kFalse:
    case Op::kTrue:
    case Op::kAtom:
      return e;
    case Op::kNot: {
      ExprPtr k = canon(e->kids()[0]);
      if (k->op() == Op::kTrue) return Expr::make_false();
      if (k->op() == Op::kFalse) return Expr::make_true();
      if (k->op() == Op::kNot) return k->kids()[0];  // double negation
      return Expr::negate(k);
    }
    case Op::kAnd:
    case Op::kOr:
    case Op::kSand:
      return canon_nary(e->op(), e->kids());
    case Op::kPand: {
      ExprPtr l = canon(e->kids()[0]);
      ExprPtr r = canon(e->kids()[1]);
      // Left-associate: a < (b < c) keeps its shape here; the rewrite engine
      // owns the a<(b<c) = (a&b)<c law.  Only (a<b)<c nesting is flattened
      // notationally, which is already the stored shape.
      return Expr::pand(l, r);
    }
  }
  return e;
}

}  // namespace

ExprPtr canonicalize(const ExprPtr& e) { return canon(e); }

std::set<EventId> events_of(const ExprPtr& e) {
  std::set<EventId> out;
  std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& n) {
    if (n->op() == Op::kAtom) {
      out.insert(n->atom());
      return;
    }
    for (const auto& k : n->kids()) walk(k);
  };
  walk(e);
  return out;
}

bool is_part_of(const EventId& x, const ExprPtr& e) {
  ExprPtr c = canonicalize(e);
  Op op = c->op();
  if (op == Op::kAtom) return c->atom() == x;
  if (op != Op::kAnd && op != Op::kSand && op != Op::kPand)
    throw std::invalid_argument("is_part_of: not a conjunction chain: " + to_string(c));
  std::function<bool(const ExprPtr&)> chain_ok = [&](const ExprPtr& n) -> bool {
    if (n->op() == Op::kAtom) return true;
    if (n->op() != op) return false;
    for (const auto& k : n->kids())
      if (!chain_ok(k)) return false;
    return true;
  };
  if (!chain_ok(c))
    throw std::invalid_argument("is_part_of: mixed operators in chain: " + to_string(c));
  return events_of(c).count(x) > 0;
}

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::kOr: return 1;
    case Op::kAnd: return 2;
    case Op::kPand: return 3;
    case Op::kSand: return 4;
    default: return 5;
  }
}

void print(const ExprPtr& e, int parent_prec, std::ostream& os) {
  switch (e->op()) {
    case Op::kFalse: os << "false"; return;
    case Op::kTrue: os << "true"; return;
    case Op::kAtom: os << e->atom(); return;
    case Op::kNot:
      os << '!';
      print(e->kids()[0], precedence(Op::kNot), os);
      return;
    default: break;
  }
  int prec = precedence(e->op());
  const char* sep = e->op() == Op::kOr    ? " | "
                    : e->op() == Op::kAnd ? " & "
                    : e->op() == Op::kPand ? " < "
                                           : " = ";
  bool need_paren = prec < parent_prec;
  if (need_paren) os << '(';
  for (size_t i = 0; i < e->kids().size(); ++i) {
    const ExprPtr& k = e->kids()[i];
    if (i) os << sep;
    // The right operand of the left-associative PAND keeps its parentheses;
    // a nested conjunction carrying negations is a closed guard scope and
    // keeps them too.
    int sub = prec;
    if (e->op() == Op::kPand && i > 0) sub = prec + 1;
    if (e->op() == Op::kAnd && k->op() == Op::kAnd) sub = prec + 1;
    print(k, sub, os);
  }
  if (need_paren) os << ')';
}

}  // namespace

std::string to_string(const ExprPtr& e) {
  std::ostringstream os;
  print(e, 0, os);
  return os.str();
}

}  // namespace tfta
