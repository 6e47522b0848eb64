/// @file tfta.cpp
/// Command line front end.
///
/// Exit codes: 0 ok, 2 parse error, 3 validation error, 4 budget or size
/// cap exceeded, 5 oracle disagreement beyond tolerance (verify only).
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tfta/analysis.hpp"
#include "tfta/seq_tree.hpp"

namespace {

using namespace tfta;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Inputs {
  std::string model_path;
  std::string expr_text;

  Model model;
  ExprPtr expr;
  bool has_model = false;

  void load() {
    if (!model_path.empty()) {
      model = parse_model(read_file(model_path));
      has_model = true;
      expr = expr_from_tree(model.tree);
    }
    if (!expr_text.empty()) expr = parse_expr(expr_text);
    if (!expr) throw ValidationError("no input: give a model file or --expr");
  }

  AnalysisOptions options(bool full_mode, std::optional<int> cutoff_flag, bool keep_sand) const {
    AnalysisOptions o;
    o.mode = full_mode ? RewriteMode::kFull : RewriteMode::kExtended;
    if (has_model) {
      o.rank_cutoff = model.config.rank_cutoff;
      o.drop_sand = model.config.drop_sand;
    }
    if (cutoff_flag) o.rank_cutoff = *cutoff_flag;
    if (keep_sand) o.drop_sand = false;
    return o;
  }

  TimeGrid grid(std::optional<double> t_flag, std::optional<int> n_flag) const {
    TimeGrid g;
    if (has_model) {
      g.t_end = model.config.mission_time;
      g.points = model.config.grid_points;
    }
    if (t_flag) g.t_end = *t_flag;
    if (n_flag) g.points = *n_flag;
    return g;
  }

  std::set<EventId> universe(const std::string& universe_flag) const {
    if (!universe_flag.empty()) {
      std::set<EventId> u;
      std::stringstream ss(universe_flag);
      std::string tok;
      while (std::getline(ss, tok, ',')) u.insert(tok);
      return u;
    }
    if (has_model) return model_universe(model);
    return events_of(expr);
  }
};

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

int cmd_check(Inputs& in) {
  in.load();
  auto rep = check_monotone(in.expr);
  std::cout << "expr: " << to_string(canonicalize(in.expr)) << "\n";
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
  for (const auto& v : rep.violations) std::cout << "violation: " << v << "\n";
  std::cout << (rep.ok ? "monotone: ok" : "monotone: rejected") << "\n";
  return rep.ok ? 0 : 3;
}

int cmd_tdnf(Inputs& in, bool extended, bool show_trace) {
  in.load();
  RewriteOptions opts;
  opts.mode = extended ? RewriteMode::kExtended : RewriteMode::kFull;
  if (in.has_model) {
    opts.rank_cutoff = in.model.config.rank_cutoff;
    opts.drop_sand = in.model.config.drop_sand;
  }
  auto res = to_tdnf(in.expr, opts, show_trace);
  std::cout << to_string(res.tdnf) << "\n";
  std::cerr << "sequences=" << res.tdnf.seqs.size() << " steps=" << res.trace.applied
            << (res.tdnf.rank_cutoff_hit ? " rank_cutoff=hit" : "") << "\n";
  if (show_trace) {
    int n = 0;
    for (const auto& st : res.trace.steps)
      std::cout << "step " << ++n << ": " << st.law << " : " << st.before << " => " << st.after
                << "\n";
  }
  return 0;
}

int cmd_mcss(Inputs& in, bool full_mode, std::optional<int> cutoff, bool keep_sand) {
  in.load();
  auto opts = in.options(full_mode, cutoff, keep_sand);
  Mcss m = mcss_pipeline(in.expr, opts);
  std::cout << m.report();
  if (m.rank_cutoff_hit) std::cerr << "note: sequences above the rank cutoff were dropped\n";
  return 0;
}

int cmd_disjoint(Inputs& in, bool full_mode, const std::string& universe_flag) {
  in.load();
  auto opts = in.options(full_mode, std::nullopt, false);
  Tdnf d = disjoint_pipeline(in.expr, in.universe(universe_flag), opts);
  for (const auto& s : d.seqs) std::cout << to_string(s) << "\n";
  std::cerr << "terms=" << d.seqs.size() << " disjoint=1\n";
  return 0;
}

int cmd_quantify(Inputs& in, const std::string& method, std::optional<double> t_flag,
                 std::optional<int> grid_flag) {
  in.load();
  auto opts = in.options(false, std::nullopt, false);
  TimeGrid g = in.grid(t_flag, grid_flag);
  BasicEvents basics = model_basics(in.model);
  double lam_max = 0;
  for (const auto& [id, b] : basics) lam_max = std::max(lam_max, b.lambda);
  if (method != "exact" && lam_max * g.t_end > 0.1)
    std::cerr << "warning: lambda_max*t = " << lam_max * g.t_end
              << " > 0.1; small-value approximation is doubtful\n";

  QuantSeries s;
  if (method == "exact") {
    Tdnf d = disjoint_pipeline(in.expr, model_universe(in.model), opts);
    s = top_series(d, basics, g, QuantMethod::kExact);
  } else if (method == "approx1") {
    Tdnf d = disjoint_pipeline(in.expr, model_universe(in.model), opts);
    s = top_series(d, basics, g, QuantMethod::kApprox);
  } else if (method == "approx2") {
    Mcss m = mcss_pipeline(in.expr, opts);
    Tdnf raw;
    raw.seqs = m.sequences;
    s = top_series(raw, basics, g, QuantMethod::kApprox);
  } else {
    throw ValidationError("unknown method '" + method + "' (exact|approx1|approx2)");
  }
  std::cout << "t=" << g.t_end << " F=" << sci(s.F_end()) << " f=" << sci(s.f_end())
            << " lambda=" << sci(s.lambda_end()) << "\n";
  return 0;
}

int cmd_verify(Inputs& in, const std::string& oracles, uint64_t samples,
               std::optional<uint64_t> seed) {
  in.load();
  auto opts = in.options(false, std::nullopt, false);
  TimeGrid g = in.grid(std::nullopt, std::nullopt);
  BasicEvents basics = model_basics(in.model);

  Tdnf d = disjoint_pipeline(in.expr, model_universe(in.model), opts);
  QuantSeries exact = top_series(d, basics, g, QuantMethod::kExact);
  std::cout << "exact    F=" << sci(exact.F_end()) << " f=" << sci(exact.f_end()) << "\n";

  bool ok = true;
  if (oracles.find("markov") != std::string::npos) {
    QuantSeries mk = markov_F(basics, in.expr, g);
    double dF = std::abs(mk.F_end() - exact.F_end()) / std::max(mk.F_end(), 1e-300);
    double df = std::abs(mk.f_end() - exact.f_end()) / std::max(mk.f_end(), 1e-300);
    std::cout << "markov   F=" << sci(mk.F_end()) << " f=" << sci(mk.f_end())
              << " dF=" << sci(dF) << " df=" << sci(df) << "\n";
    if (dF > 1e-3 || df > 1e-3) ok = false;
  }
  if (oracles.find("mc") != std::string::npos) {
    McConfig cfg;
    cfg.samples = samples;
    cfg.t_end = g.t_end;
    if (seed) cfg.seed = *seed;
    McResult mc = monte_carlo_F(basics, in.expr, cfg);
    double delta = std::abs(mc.estimate - exact.F_end());
    std::cout << "mc       F=" << sci(mc.estimate) << " se=" << sci(mc.std_error)
              << " delta=" << sci(delta) << " sigmas="
              << sci(mc.std_error > 0 ? delta / mc.std_error : 0.0) << "\n";
    if (mc.std_error > 0 && delta > 3 * mc.std_error) ok = false;
  }
  if (oracles.find("seqtree") != std::string::npos) {
    // Qualitative cross-check: the disjoint form is equivalent to the input.
    bool eq = events_of(in.expr).size() <= 6 &&
              equivalent(in.expr, to_expr(d));
    std::cout << "seqtree  equivalent=" << (eq ? 1 : 0) << "\n";
    if (!eq) ok = false;
  }
  return ok ? 0 : 5;
}

int cmd_tree(Inputs& in, bool dot, bool no_sand) {
  in.load();
  auto evset = events_of(in.expr);
  std::vector<EventId> events(evset.begin(), evset.end());
  SeqTree t = build_tree(events, !no_sand);
  Classified c = classify(in.expr, t);
  if (dot) {
    std::cout << to_dot(c);
    return 0;
  }
  std::cout << "nodes=" << t.nodes.size() << " minimal=" << c.count(NodeClass::kMinimalFailure)
            << " nonminimal=" << c.count(NodeClass::kNonMinimalFailure) << "\n";
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    if (c.cls[i] == NodeClass::kNonFailure) continue;
    std::cout << (c.cls[i] == NodeClass::kMinimalFailure ? "minimal     " : "non-minimal ");
    for (size_t j = 0; j < events.size(); ++j)
      if (t.nodes[i][j]) std::cout << events[j] << ':' << int(t.nodes[i][j]) << ' ';
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal fault tree analysis"};
  app.require_subcommand(1);

  Inputs in;
  bool extended = false, full_mode = false, show_trace = false, keep_sand = false;
  bool dot = false, no_sand = false;
  std::optional<int> cutoff, grid_flag;
  std::optional<double> t_flag;
  std::optional<uint64_t> seed;
  std::string method = "exact", oracles = "markov,mc,seqtree", universe_flag;
  uint64_t samples = 1'000'000;

  auto add_inputs = [&](CLI::App* c, bool model_positional = true) {
    if (model_positional) c->add_option("model", in.model_path, "model file");
    c->add_option("--expr", in.expr_text, "expression instead of the model TOP");
  };

  auto* check = app.add_subcommand("check", "parse and monotonicity report");
  add_inputs(check);
  auto* tdnf = app.add_subcommand("tdnf", "temporal disjunctive normal form");
  add_inputs(tdnf);
  tdnf->add_flag("--extended", extended, "extended TDNF (keep coprime AND groups)");
  tdnf->add_flag("--trace", show_trace, "print the rewrite trace");
  auto* mcss = app.add_subcommand("mcss", "minimal cutset sequences");
  add_inputs(mcss);
  mcss->add_option("--rank-cutoff", cutoff, "drop sequences above this rank");
  mcss->add_flag("--full", full_mode, "full expansion instead of extended");
  mcss->add_flag("--keep-sand", keep_sand, "keep SAND sequences even if the model drops them");
  auto* disjoint = app.add_subcommand("disjoint", "pairwise disjoint form");
  add_inputs(disjoint);
  disjoint->add_flag("--full", full_mode, "temporal minterms over the whole universe");
  disjoint->add_option("--universe", universe_flag, "comma separated event universe");
  auto* quantify = app.add_subcommand("quantify", "TOP failure probability/frequency/rate");
  add_inputs(quantify);
  quantify->add_option("--method", method, "exact|approx1|approx2");
  quantify->add_option("--grid", grid_flag, "grid points");
  quantify->add_option("--time", t_flag, "mission time override");
  auto* verify = app.add_subcommand("verify", "cross-method comparison");
  add_inputs(verify);
  verify->add_option("--oracles", oracles, "comma separated: markov,mc,seqtree");
  verify->add_option("--samples", samples, "Monte Carlo samples");
  verify->add_option("--seed", seed, "Monte Carlo seed");
  auto* tree = app.add_subcommand("tree", "classified sequential failure tree");
  add_inputs(tree);
  tree->add_flag("--dot", dot, "DOT output");
  tree->add_flag("--no-sand", no_sand, "simplified tree without SAND nodes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(in);
    if (tdnf->parsed()) return cmd_tdnf(in, extended, show_trace);
    if (mcss->parsed()) return cmd_mcss(in, full_mode, cutoff, keep_sand);
    if (disjoint->parsed()) return cmd_disjoint(in, full_mode, universe_flag);
    if (quantify->parsed()) return cmd_quantify(in, method, t_flag, grid_flag);
    if (verify->parsed()) return cmd_verify(in, oracles, samples, seed);
    if (tree->parsed()) return cmd_tree(in, dot, no_sand);
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.line() << ":" << e.col() << ": " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const NonMonotoneError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
