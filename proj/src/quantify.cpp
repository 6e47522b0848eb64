/// @file quantify.cpp
#include "tfta/quantify.hpp"

#include <cmath>
#include <stdexcept>

namespace tfta {

namespace {

Eigen::ArrayXd cumtrapz(const Eigen::ArrayXd& y, double h) {
  Eigen::ArrayXd out(y.size());
  out(0) = 0.0;
  for (Eigen::Index i = 1; i < y.size(); ++i)
    out(i) = out(i - 1) + 0.5 * h * (y(i - 1) + y(i));
  return out;
}

Eigen::ArrayXd safe_lambda(const Eigen::ArrayXd& f, const Eigen::ArrayXd& F) {
  return f / (1.0 - F.min(1.0 - 1e-15));
}

const BasicEventData& rate_of(const BasicEvents& basics, const EventId& id) {
  auto it = basics.find(id);
  if (it == basics.end()) throw std::runtime_error("missing rate data for event " + id);
  return it->second;
}

}  // namespace

QuantSeries basic_series(const BasicEventData& b, const TimeGrid& g) {
  QuantSeries s;
  s.grid = g;
  Eigen::ArrayXd t = g.times();
  s.F = 1.0 - (-b.lambda * t).exp();
  s.f = b.lambda * (-b.lambda * t).exp();
  s.lambda = safe_lambda(s.f, s.F);
  return s;
}

QuantSeries pand_series(const QuantSeries& left, const QuantSeries& right, const TimeGrid& g) {
  QuantSeries s;
  s.grid = g;
  s.f = left.F * right.f;
  s.F = cumtrapz(s.f, g.step());
  s.lambda = safe_lambda(s.f, s.F);
  return s;
}

QuantSeries sand_series(const TimeGrid& g) {
  QuantSeries s;
  s.grid = g;
  s.F = Eigen::ArrayXd::Zero(g.points);
  s.f = Eigen::ArrayXd::Zero(g.points);
  s.lambda = Eigen::ArrayXd::Zero(g.points);
  return s;
}

QuantSeries mcss_exact(const Sequence& seq, const BasicEvents& basics, const TimeGrid& g) {
  if (seq.has_sand()) return sand_series(g);
  Eigen::ArrayXd t = g.times();
  QuantSeries s;
  s.grid = g;
  if (seq.is_true()) {
    s.F = Eigen::ArrayXd::Ones(g.points);
    s.f = Eigen::ArrayXd::Zero(g.points);
    s.lambda = Eigen::ArrayXd::Zero(g.points);
    return s;
  }

  // Level by level: the running integral of the previous level feeds the
  // next one.  For an extended core the level density is the Boolean one:
  // f_K = sum_i f_i * prod_{j != i} F_j.
  Eigen::ArrayXd cum = Eigen::ArrayXd::Ones(g.points);
  Eigen::ArrayXd level_f;
  for (size_t k = 0; k < seq.chain.size(); ++k) {
    const Core& core = seq.chain[k];
    if (core.events.size() == 1) {
      const auto& b = rate_of(basics, core.events[0]);
      level_f = b.lambda * (-b.lambda * t).exp();
    } else {
      level_f = Eigen::ArrayXd::Zero(g.points);
      for (size_t i = 0; i < core.events.size(); ++i) {
        const auto& bi = rate_of(basics, core.events[i]);
        Eigen::ArrayXd term = bi.lambda * (-bi.lambda * t).exp();
        for (size_t j = 0; j < core.events.size(); ++j) {
          if (j == i) continue;
          const auto& bj = rate_of(basics, core.events[j]);
          term *= 1.0 - (-bj.lambda * t).exp();
        }
        level_f += term;
      }
    }
    level_f *= cum;
    if (k + 1 < seq.chain.size()) cum = cumtrapz(level_f, g.step());
  }
  // Negated events multiply by their reliability at observation time: the
  // per-sequence probabilities then sum exactly over the disjoint form
  // (which partitions the failure states).  f is the full derivative of
  // that product, so d/dt F == f and the TOP sum equals the failure flux.
  Eigen::ArrayXd rel = Eigen::ArrayXd::Ones(g.points);
  double guard_rate = 0.0;
  for (const auto& gid : seq.guard) {
    const auto& b = rate_of(basics, gid);
    rel *= (-b.lambda * t).exp();
    guard_rate += b.lambda;
  }
  Eigen::ArrayXd chain_F = cumtrapz(level_f, g.step());
  s.F = chain_F * rel;
  s.f = (level_f - guard_rate * chain_F) * rel;
  s.lambda = safe_lambda(s.f, s.F);
  return s;
}

ApproxPoint mcss_approx(const Sequence& seq, const BasicEvents& basics, double t) {
  ApproxPoint out;
  if (seq.has_sand()) return out;
  if (seq.is_true()) {
    out.F = 1.0;
    return out;
  }
  // Coverage factor: product over extended cores of C((k-1)+(r-1), k-1)*r!.
  long long ups = 1;
  {
    int pos = 1;
    for (const auto& c : seq.chain) {
      int r = static_cast<int>(c.events.size());
      if (c.kind == CoreKind::kLoose && r >= 2) {
        long long binom = 1;
        for (int j = 1; j <= pos - 1; ++j) binom = binom * ((r - 1) + j) / j;
        long long fact = 1;
        for (int j = 2; j <= r; ++j) fact *= j;
        ups *= binom * fact;
      }
      pos += r;
    }
  }
  int n = seq.rank();
  double fact_n = 1;
  for (int j = 2; j <= n; ++j) fact_n *= j;
  double chain = 1.0;  // prod lambda_i * t
  for (const auto& c : seq.chain)
    for (const auto& e : c.events) chain *= rate_of(basics, e).lambda * t;
  double rel = 1.0;   // prod (1 - lambda_I t)
  double drel = 0.0;  // d/dt of that product
  for (const auto& gid : seq.guard) {
    double lg = rate_of(basics, gid).lambda;
    drel = drel * (1.0 - lg * t) + rel * (-lg);
    rel *= 1.0 - lg * t;
  }
  double pref = static_cast<double>(ups) / fact_n;
  out.F = pref * chain * rel;
  double dchain = t > 0 ? n * chain / t : 0.0;
  if (t == 0.0) {
    // d/dt of prod(lambda_i t) at 0 is zero unless the sequence is rank one.
    dchain = 0.0;
    if (n == 1) dchain = rate_of(basics, seq.chain[0].events[0]).lambda;
  }
  out.f = pref * (dchain * rel + chain * drel);
  return out;
}

QuantSeries top_series(const Tdnf& t, const BasicEvents& basics, const TimeGrid& g,
                       QuantMethod method) {
  if (method == QuantMethod::kExact && !t.disjoint)
    throw std::invalid_argument("exact TOP quantification needs a disjoint form");
  QuantSeries s;
  s.grid = g;
  s.F = Eigen::ArrayXd::Zero(g.points);
  s.f = Eigen::ArrayXd::Zero(g.points);
  if (method == QuantMethod::kExact) {
    for (const auto& seq : t.seqs) {
      QuantSeries m = mcss_exact(seq, basics, g);
      s.F += m.F;
      s.f += m.f;
    }
  } else {
    Eigen::ArrayXd times = g.times();
    for (const auto& seq : t.seqs) {
      for (int i = 0; i < g.points; ++i) {
        ApproxPoint p = mcss_approx(seq, basics, times(i));
        s.F(i) += p.F;
        s.f(i) += p.f;
      }
    }
  }
  s.lambda = safe_lambda(s.f, s.F);
  return s;
}

LambdaInfo lambda_of(const QuantSeries& s) {
  if ((s.F >= 1.0).any()) throw std::domain_error("F reaches 1; failure rate undefined");
  LambdaInfo out;
  out.lambda = s.f / (1.0 - s.F);
  out.f_approximates_lambda = (s.F < 1e-3).all();
  return out;
}

}  // namespace tfta
