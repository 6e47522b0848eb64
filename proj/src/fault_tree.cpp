/// @file fault_tree.cpp
#include "tfta/fault_tree.hpp"

#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace tfta {

namespace {

enum class Mark { kNone, kInProgress, kDone };

}  // namespace

ExprPtr expr_from_tree(const FaultTree& t) {
  std::unordered_map<std::string, ExprPtr> memo;
  std::unordered_map<std::string, Mark> marks;

  std::function<ExprPtr(const std::string&)> build = [&](const std::string& id) -> ExprPtr {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    if (t.basic_events.count(id)) {
      ExprPtr a = Expr::atom(id);
      memo.emplace(id, a);
      return a;
    }
    auto git = t.gates.find(id);
    if (git == t.gates.end()) throw std::runtime_error("dangling reference: " + id);
    if (marks[id] == Mark::kInProgress) throw std::runtime_error("cycle through gate: " + id);
    marks[id] = Mark::kInProgress;
    std::vector<ExprPtr> kids;
    kids.reserve(git->second.children.size());
    for (const auto& c : git->second.children) kids.push_back(build(c));
    ExprPtr e;
    switch (git->second.kind) {
      case GateKind::kAnd: e = Expr::conj(std::move(kids)); break;
      case GateKind::kOr: e = Expr::disj(std::move(kids)); break;
      case GateKind::kSand: e = Expr::sand(std::move(kids)); break;
      case GateKind::kNot:
        if (kids.size() != 1) throw std::runtime_error("NOT gate needs exactly one input: " + id);
        e = Expr::negate(kids[0]);
        break;
      case GateKind::kPand:
        if (kids.size() < 2) throw std::runtime_error("PAND gate needs at least two inputs: " + id);
        e = Expr::pand_chain(kids);  // n-ary input left-associated
        break;
    }
    marks[id] = Mark::kDone;
    memo.emplace(id, e);
    return e;
  };

  return canonicalize(build(t.top));
}

}  // namespace tfta
