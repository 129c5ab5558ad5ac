#pragma once

#include "gridroute/problem.hpp"

#include <vector>

namespace gridroute {

// An atomic two-pin routing job produced by spanning-tree decomposition.
struct TwoPinTask {
    int net_id = 0;
    Gcell start;
    Gcell goal;
    int order_index = 0;
};

// 3-D Manhattan distance; a via step has weight 1 like any other move.
int manhattan(const Gcell& a, const Gcell& b);

// Minimum spanning tree over the net's distinct pins under manhattan().
// Coincident pins are deduplicated first; |tasks| = distinct_pins - 1.
// Ties in edge weight are broken toward lower net-file pin indices, so the
// task list is deterministic.
std::vector<TwoPinTask> decompose(const Net& net);

// Per-net decompositions concatenated in net file order, with order_index
// assigned sequentially over the whole problem.
std::vector<TwoPinTask> decompose_all(const Problem& p);

} // namespace gridroute
