#pragma once

#include "gridroute/grid.hpp"
#include "gridroute/problem.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gridroute {

// Parameters of one batch of generated problems.
struct GenSpec {
    int problem_count = 1;
    int width = 8;
    int height = 8;
    int net_count = 1;
    int max_pins_per_net = 2;
    int normal_capacity = 3; // applied to both routing directions
    int reduced_edge_count = 0;
    int reduced_value = 1;
    std::uint64_t seed = 0;
};

// Generates problem_count problems. Pin counts are uniform over
// {2..max_pins_per_net}; pins are uniform over all cells of both layers,
// without duplicates within a net. When reduced_edge_count > 0 the problem
// is first routed sequentially and the most-utilized in-layer edges with
// positive capacity are set to reduced_value (ties toward the canonical
// EdgeId order; via edges are never candidates since their capacity is not
// described by problem files). Deterministic for a given spec.
std::vector<Problem> generate(const GenSpec& spec);

// Traffic statistics of a solution over a problem's lattice.
struct EdgeUtilization {
    int width = 0;
    int height = 0;
    std::map<EdgeId, long long> usage; // zero-usage edges omitted

    long long total() const;

    // Buckets over every lattice edge (zero-usage edges included):
    // histogram[u] = number of edges crossed exactly u times.
    std::map<long long, long long> histogram() const;

    // Per-direction matrices, summed over layers. horizontal is H x (W-1),
    // vertical is (H-1) x W, via is H x W; element [y][x] is the usage of
    // the edge whose low endpoint is (x, y).
    std::vector<std::vector<long long>> horizontal_heatmap() const;
    std::vector<std::vector<long long>> vertical_heatmap() const;
    std::vector<std::vector<long long>> via_heatmap() const;
};

EdgeUtilization edge_utilization(const Problem& p, const RouteSolution& s);

// CSV renderings for the *.heat.csv / *.hist.csv companion files.
std::string heatmap_csv(const EdgeUtilization& u);
std::string histogram_csv(const EdgeUtilization& u);

} // namespace gridroute
