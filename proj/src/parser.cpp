/// @file parser.cpp
#include "tfta/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace tfta {

namespace {

class ExprLexer {
 public:
  explicit ExprLexer(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
  }
  bool eof() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  void advance() {
    if (pos_ < s_.size()) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, col_); }

  std::string ident() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
            s_[pos_] == '.' || s_[pos_] == '-')) {
      advance();
    }
    if (start == pos_) fail("expected an event name");
    return s_.substr(start, pos_ - start);
  }

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

// Grammar, loosest binding first:
//   or   := and ('|' and)*
//   and  := pand ('&' pand)*
//   pand := sand ('<' sand)*          (left-associative)
//   sand := unary ('=' unary)*
//   unary:= '!' unary | '(' or ')' | 'true' | 'false' | ident
class ExprParser {
 public:
  explicit ExprParser(const std::string& s) : lex_(s) {}

  ExprPtr parse() {
    ExprPtr e = parse_or();
    if (!lex_.eof()) lex_.fail("trailing input");
    return canonicalize(e);
  }

 private:
  ExprPtr parse_or() {
    std::vector<ExprPtr> kids{parse_and()};
    while (lex_.peek() == '|') {
      lex_.advance();
      kids.push_back(parse_and());
    }
    return Expr::disj(std::move(kids));
  }
  ExprPtr parse_and() {
    ExprPtr e = parse_pand();
    while (lex_.peek() == '&') {
      lex_.advance();
      // Binary left association keeps the validity scope of negated
      // conjuncts: !a & b & c reads as (!a & b) & c.
      e = Expr::conj({e, parse_pand()});
    }
    return e;
  }
  ExprPtr parse_pand() {
    ExprPtr e = parse_sand();
    while (lex_.peek() == '<') {
      lex_.advance();
      e = Expr::pand(e, parse_sand());
    }
    return e;
  }
  ExprPtr parse_sand() {
    std::vector<ExprPtr> kids{parse_unary()};
    while (lex_.peek() == '=') {
      lex_.advance();
      kids.push_back(parse_unary());
    }
    return Expr::sand(std::move(kids));
  }
  ExprPtr parse_unary() {
    char c = lex_.peek();
    if (c == '!') {
      lex_.advance();
      return Expr::negate(parse_unary());
    }
    if (c == '(') {
      lex_.advance();
      ExprPtr e = parse_or();
      if (lex_.peek() != ')') lex_.fail("expected ')'");
      lex_.advance();
      return e;
    }
    if (c == '\0') lex_.fail("unexpected end of input");
    std::string id = lex_.ident();
    if (id == "true") return Expr::make_true();
    if (id == "false") return Expr::make_false();
    return Expr::atom(id);
  }

  ExprLexer lex_;
};

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_float(const std::string& s, int line_no) {
  // The fixtures normalize decimal commas to dots upstream; accept the
  // usual scientific notation.
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + s + "'", line_no, 1);
  }
}

}  // namespace

ExprPtr parse_expr(const std::string& text) { return ExprParser(text).parse(); }

Model parse_model(const std::string& text) {
  Model m;
  bool saw_top = false;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    if (kw == "event") {
      if (toks.size() != 3 || toks[2].rfind("lambda=", 0) != 0)
        throw ParseError("expected: event <id> lambda=<float>", line_no, 1);
      BasicEventData b;
      b.id = toks[1];
      b.lambda = parse_float(toks[2].substr(7), line_no);
      if (b.lambda < 0) throw ValidationError("negative rate for event " + b.id);
      if (m.tree.basic_events.count(b.id) || m.tree.gates.count(b.id))
        throw ValidationError("duplicate id: " + b.id);
      m.tree.basic_events.emplace(b.id, b);
    } else if (kw == "gate") {
      if (toks.size() < 4) throw ParseError("expected: gate <id> <KIND> <child>...", line_no, 1);
      Gate g;
      const std::string& kind = toks[2];
      if (kind == "AND") g.kind = GateKind::kAnd;
      else if (kind == "OR") g.kind = GateKind::kOr;
      else if (kind == "NOT") g.kind = GateKind::kNot;
      else if (kind == "PAND") g.kind = GateKind::kPand;
      else if (kind == "SAND") g.kind = GateKind::kSand;
      else throw ParseError("unknown gate kind '" + kind + "'", line_no, 1);
      g.children.assign(toks.begin() + 3, toks.end());
      if (m.tree.basic_events.count(toks[1]) || m.tree.gates.count(toks[1]))
        throw ValidationError("duplicate id: " + toks[1]);
      m.tree.gates.emplace(toks[1], std::move(g));
    } else if (kw == "top") {
      if (toks.size() != 2) throw ParseError("expected: top <id>", line_no, 1);
      if (saw_top) throw ValidationError("more than one top declaration");
      m.tree.top = toks[1];
      saw_top = true;
    } else if (kw == "config") {
      for (size_t i = 1; i < toks.size(); ++i) {
        auto eq = toks[i].find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value in config", line_no, 1);
        std::string key = toks[i].substr(0, eq), val = toks[i].substr(eq + 1);
        if (key == "mission_time") m.config.mission_time = parse_float(val, line_no);
        else if (key == "grid_points") m.config.grid_points = static_cast<int>(parse_float(val, line_no));
        else if (key == "rank_cutoff") m.config.rank_cutoff = static_cast<int>(parse_float(val, line_no));
        else if (key == "drop_sand") m.config.drop_sand = parse_float(val, line_no) != 0;
        else throw ParseError("unknown config key '" + key + "'", line_no, 1);
      }
    } else {
      throw ParseError("unknown directive '" + kw + "'", line_no, 1);
    }
  }
  if (!saw_top) throw ValidationError("missing top declaration");
  if (m.config.mission_time <= 0) throw ValidationError("mission_time must be > 0");
  if (m.config.grid_points < 2) throw ValidationError("grid_points must be >= 2");
  // Every referenced child resolves; expr_from_tree reports cycles.
  for (const auto& [id, g] : m.tree.gates)
    for (const auto& c : g.children)
      if (!m.tree.gates.count(c) && !m.tree.basic_events.count(c))
        throw ValidationError("gate " + id + " references unknown id " + c);
  if (!m.tree.gates.count(m.tree.top) && !m.tree.basic_events.count(m.tree.top))
    throw ValidationError("top references unknown id " + m.tree.top);
  expr_from_tree(m.tree);  // cycle check
  return m;
}

std::string print_model(const Model& m) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [id, b] : m.tree.basic_events)
    os << "event " << id << " lambda=" << b.lambda << "\n";
  for (const auto& [id, g] : m.tree.gates) {
    os << "gate " << id << ' ';
    switch (g.kind) {
      case GateKind::kAnd: os << "AND"; break;
      case GateKind::kOr: os << "OR"; break;
      case GateKind::kNot: os << "NOT"; break;
      case GateKind::kPand: os << "PAND"; break;
      case GateKind::kSand: os << "SAND"; break;
    }
    for (const auto& c : g.children) os << ' ' << c;
    os << "\n";
  }
  os << "top " << m.tree.top << "\n";
  os << "config mission_time=" << m.config.mission_time
     << " grid_points=" << m.config.grid_points;
  if (m.config.rank_cutoff) os << " rank_cutoff=" << *m.config.rank_cutoff;
  if (m.config.drop_sand) os << " drop_sand=1";
  os << "\n";
  return os.str();
}

namespace {

// Negation placement rules: a negated term may only appear AND-combined
// with at least one non-negated term.  Expressions like !A | B at gate
// level, or negations feeding PAND/SAND, are not allowed.
void walk_monotone(const ExprPtr& e, bool under_and_with_positive, MonotoneReport& rep) {
  switch (e->op()) {
    case Op::kNot: {
      if (!under_and_with_positive)
        rep.violations.push_back("negated term not AND-combined with a non-negated term: " +
                                 to_string(e));
      // Inside the negation everything is fine structurally; nested
      // negations cancel during canonicalization.
      return;
    }
    case Op::kAnd: {
      bool has_positive = false;
      for (const auto& k : e->kids())
        if (k->op() != Op::kNot) has_positive = true;
      if (!has_positive) {
        rep.violations.push_back("conjunction of negations only: " + to_string(e));
      }
      for (const auto& k : e->kids()) walk_monotone(k, has_positive, rep);
      return;
    }
    case Op::kOr:
      for (const auto& k : e->kids()) walk_monotone(k, false, rep);
      return;
    case Op::kPand:
    case Op::kSand:
      for (const auto& k : e->kids()) {
        if (k->op() == Op::kNot)
          rep.violations.push_back("negation used as PAND/SAND operand: " + to_string(e));
        else
          walk_monotone(k, false, rep);
      }
      return;
    default:
      return;
  }
}

}  // namespace

MonotoneReport check_monotone(const ExprPtr& e) {
  MonotoneReport rep;
  ExprPtr c = canonicalize(e);
  if (c->op() == Op::kNot)
    rep.violations.push_back("top-level negation: " + to_string(c));
  else
    walk_monotone(c, false, rep);
  rep.ok = rep.violations.empty();
  return rep;
}

}  // namespace tfta
