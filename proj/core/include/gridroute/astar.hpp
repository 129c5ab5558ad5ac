#pragma once

#include "gridroute/decompose.hpp"
#include "gridroute/env.hpp"
#include "gridroute/grid.hpp"
#include "gridroute/problem.hpp"

#include <vector>

namespace gridroute {

// Transition cost of one move: 1 while the crossed edge has capacity left,
// 1000 once it is depleted.
inline constexpr long long kUnitMoveCost = 1;
inline constexpr long long kOverflowMoveCost = 1000;

struct Path {
    std::vector<Gcell> cells; // start..goal inclusive; empty iff start == goal
    long long cost = 0;
};

// Minimum-cost path between two cells under the current capacities, using
// the 3-D Manhattan distance heuristic (admissible: the cheapest move costs
// 1). Deterministic: priority-queue ties resolve by lower h, then canonical
// cell order, then insertion order. Does not mutate the grid.
Path route_two_pin(const GridGraph& g, const Gcell& start, const Gcell& goal);

struct RoutedProblem {
    RouteSolution solution;
    // The walked moves re-expressed with environment semantics (-1 per move,
    // +100 and terminal on the goal), capacities observed as they deplete.
    std::vector<Transition> transitions;
    GridGraph final_grid;
};

// Sequential router: decomposes the problem, solves the two-pin tasks in
// order, and consumes capacity of every edge of each found path before the
// next task starts.
RoutedProblem route_problem(const Problem& p, const GridOptions& opts = {});

} // namespace gridroute
