/// @file quantify.hpp
/// Probabilistic evaluation of disjoint MCSS on a uniform time grid.
#pragma once

#include <Eigen/Dense>
#include <map>

#include "tfta/fault_tree.hpp"
#include "tfta/sequence.hpp"

namespace tfta {

struct TimeGrid {
  double t_end = 1000.0;  // mission time, hours
  int points = 4001;

  Eigen::ArrayXd times() const {
    return Eigen::ArrayXd::LinSpaced(points, 0.0, t_end);
  }
  double step() const { return t_end / (points - 1); }
};

/// F(t) dimensionless, f(t) and lambda(t) in 1/hour, sampled on the grid.
struct QuantSeries {
  TimeGrid grid;
  Eigen::ArrayXd F;
  Eigen::ArrayXd f;
  Eigen::ArrayXd lambda;

  double F_end() const { return F(F.size() - 1); }
  double f_end() const { return f(f.size() - 1); }
  double lambda_end() const { return lambda(lambda.size() - 1); }
};

using BasicEvents = std::map<EventId, BasicEventData>;

/// Exponential F and f for a constant failure rate.
QuantSeries basic_series(const BasicEventData& b, const TimeGrid& g);

/// f = F_left * f_right pointwise; F is the running integral of f.
QuantSeries pand_series(const QuantSeries& left, const QuantSeries& right, const TimeGrid& g);

/// Exact simultaneity of independent events has probability zero.
QuantSeries sand_series(const TimeGrid& g);

/// Nested convolution of one (extended) event sequence; negated events
/// multiply the density by their reliability.  SAND sequences are zero.
QuantSeries mcss_exact(const Sequence& seq, const BasicEvents& basics, const TimeGrid& g);

struct ApproxPoint {
  double F = 0.0;
  double f = 0.0;
};

/// Small-value closed form: F ~ Y/n! * prod(lambda_i t) * prod(1 - lambda_I t)
/// and f = dF/dt.  Warns (via return flag in quantify_top) when
/// lambda_max * t > 0.1.
ApproxPoint mcss_approx(const Sequence& seq, const BasicEvents& basics, double t);

enum class QuantMethod { kExact, kApprox };

/// TOP aggregation: plain sums over the disjoint sequences (for the approx
/// method a non-disjoint MCSS list is accepted; the result is conservative).
QuantSeries top_series(const Tdnf& disjoint, const BasicEvents& basics, const TimeGrid& g,
                       QuantMethod method);

struct LambdaInfo {
  Eigen::ArrayXd lambda;
  bool f_approximates_lambda = false;  // F stays below 1e-3 on the grid
};

/// lambda = f / (1 - F); throws std::domain_error when F reaches 1.
LambdaInfo lambda_of(const QuantSeries& s);

}  // namespace tfta
