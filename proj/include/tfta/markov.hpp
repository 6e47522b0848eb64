/// @file markov.hpp
/// State-space reference oracle: transient solution of the Markov chain
/// whose states are the nodes of the (SAND-free) sequential failure tree.
#pragma once

#include "tfta/quantify.hpp"
#include "tfta/seq_tree.hpp"

namespace tfta {

struct MarkovLimits {
  int max_events = 6;
};

/// Solves dP/dt = Q P from the all-operational state with the classical
/// fixed-step fourth-order scheme (step = grid spacing); F is the summed
/// probability of failure states, f the exact probability flux into them.
QuantSeries markov_F(const BasicEvents& basics, const ExprPtr& e, const TimeGrid& g,
                     const MarkovLimits& limits = {});

}  // namespace tfta
