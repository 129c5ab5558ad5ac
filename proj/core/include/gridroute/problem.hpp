#pragma once

#include "gridroute/grid.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gridroute {

struct Net {
    std::string name;
    int id = 0;
    std::vector<Gcell> pins; // 0-based layer in memory, 1-based in files
};

struct ReducedEdge {
    EdgeId edge;
    int capacity = 0;
};

// One routing problem: grid dimensions, the two normal capacities, nets,
// and specific-edge capacity overrides.
struct Problem {
    int width = 0;
    int height = 0;
    int layers = 2;
    int vertical_capacity = 0;   // y-edges on layer 1
    int horizontal_capacity = 0; // x-edges on layer 0
    std::vector<Net> nets;
    std::vector<ReducedEdge> reduced_edges;
};

// One tile-to-tile crossing, kept in walk order.
using Segment = std::pair<Gcell, Gcell>;

struct NetRoute {
    std::string name;
    int id = 0;
    std::vector<Segment> segments;
};

struct RouteSolution {
    std::vector<NetRoute> nets;
};

struct ParseError : std::runtime_error {
    ParseError(int line_arg, const std::string& what_arg)
        : std::runtime_error("line " + std::to_string(line_arg) + ": " + what_arg),
          line(line_arg) {}
    int line;
};

// Text formats are UTF-8, LF line endings, single-space separators.
// Problem files:
//   grid W H L
//   vertical capacity Cv
//   horizontal capacity Ch
//   num net N
//   <name> <id> <pin_count>      (per net, then pin_count lines "x y z")
//   num reduced edges K          (optional block at end of file)
//   x1 y1 z1 x2 y2 z2 cap        (K lines)
// Solution files, per net:
//   <name> <id>
//   (x1,y1,z1)-(x2,y2,z2)        (one line per unit segment)
//   !
Problem parse_problem(const std::string& text);
std::string write_problem(const Problem& p);

RouteSolution parse_solution(const std::string& text);
std::string write_solution(const RouteSolution& s);

} // namespace gridroute
