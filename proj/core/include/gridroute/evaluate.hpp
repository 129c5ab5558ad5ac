#pragma once

#include "gridroute/grid.hpp"
#include "gridroute/problem.hpp"

#include <map>
#include <string>
#include <vector>

namespace gridroute {

// Total count of unit segments over all nets; via crossings count like any
// other move.
long long wirelength(const RouteSolution& s);

// Per-edge crossing counts summed over all nets, canonical EdgeId order.
// Throws if a segment lies on a nonexistent lattice edge.
std::map<EdgeId, long long> edge_usage(const Problem& p, const RouteSolution& s);

// Sum over edges of max(0, usage - original capacity).
long long overflow(const Problem& p, const RouteSolution& s, const GridOptions& opts = {});

// True iff the net's segments form a connected subgraph containing all of
// its distinct pins. Flags follow problem net order; solution nets are
// matched by name.
std::vector<bool> check_connectivity(const Problem& p, const RouteSolution& s);

// Type I: no edge with positive original capacity is fully utilized by the
// solution (usage < capacity everywhere). Type II: at least one such edge
// is fully utilized or overflows.
enum class ProblemType { TypeI, TypeII };
ProblemType classify(const Problem& p, const RouteSolution& astar_solution,
                     const GridOptions& opts = {});
const char* to_string(ProblemType t);

// Line-oriented report: "net <name> WL <n> OF <n>" per net (per-net OF is
// the net's own usage against original capacities), then a totals line with
// the whole-solution WL and the jointly accumulated OF.
std::string evaluation_report(const Problem& p, const RouteSolution& s,
                              const GridOptions& opts = {});

struct CompareCase {
    const Problem* problem;
    const RouteSolution* solution_a;
    const RouteSolution* solution_b;
};

struct CompareRow {
    bool valid = false;
    std::string note;
    long long wl_a = 0, wl_b = 0;
    long long of_a = 0, of_b = 0;
    bool b_wins = false; // strictly better on (OF, WL) lexicographic order
};

struct CompareResult {
    std::vector<CompareRow> rows;
    int valid_count = 0;
    int b_win_count = 0;
    // Fraction of valid rows where B strictly beats A; 0 when nothing is valid.
    double win_rate() const {
        return valid_count == 0 ? 0.0 : static_cast<double>(b_win_count) / valid_count;
    }
};

// Scores each (problem, A, B) pair. Pairs with an invalid solution (broken
// connectivity or malformed segments) are excluded from the rate and carry
// an explanatory note.
CompareResult compare(const std::vector<CompareCase>& cases, const GridOptions& opts = {});

} // namespace gridroute
