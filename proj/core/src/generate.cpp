#include "gridroute/generate.hpp"

#include "gridroute/astar.hpp"
#include "gridroute/evaluate.hpp"
#include "gridroute/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace gridroute {

namespace {

void validate(const GenSpec& spec) {
    if (spec.problem_count < 1)
        throw std::invalid_argument("problem_count must be at least 1");
    if (spec.width < 1 || spec.height < 1)
        throw std::invalid_argument("grid dimensions must be positive");
    if (spec.net_count < 1)
        throw std::invalid_argument("net_count must be at least 1");
    if (spec.max_pins_per_net < 1)
        throw std::invalid_argument("max_pins_per_net must be at least 1");
    if (spec.max_pins_per_net > spec.width * spec.height * 2)
        throw std::invalid_argument("max_pins_per_net exceeds the number of cells");
    if (spec.reduced_edge_count < 0 || spec.reduced_value < 0)
        throw std::invalid_argument("reduced edge settings must be non-negative");
}

Problem generate_one(const GenSpec& spec, std::uint64_t problem_seed) {
    Rng rng(problem_seed);
    Problem p;
    p.width = spec.width;
    p.height = spec.height;
    p.vertical_capacity = spec.normal_capacity;
    p.horizontal_capacity = spec.normal_capacity;

    const int pin_floor = std::min(2, spec.max_pins_per_net);
    for (int n = 0; n < spec.net_count; ++n) {
        Net net;
        net.name = "n" + std::to_string(n);
        net.id = n;
        const int pin_count =
            static_cast<int>(rng.range(pin_floor, spec.max_pins_per_net));
        while (static_cast<int>(net.pins.size()) < pin_count) {
            const Gcell pin{static_cast<int>(rng.below(spec.width)),
                            static_cast<int>(rng.below(spec.height)),
                            static_cast<int>(rng.below(2))};
            if (std::find(net.pins.begin(), net.pins.end(), pin) == net.pins.end())
                net.pins.push_back(pin);
        }
        p.nets.push_back(std::move(net));
    }

    if (spec.reduced_edge_count > 0) {
        // Rank the in-layer positive-capacity edges by how hard the
        // sequential router uses them on the unreduced problem.
        const auto routed = route_problem(p);
        const auto usage = edge_usage(p, routed.solution);
        const GridGraph original = GridGraph::from_problem(p);

        struct Candidate {
            long long used;
            EdgeId edge;
        };
        std::vector<Candidate> candidates;
        for (const auto& edge : original.all_edges()) {
            if (edge.a.z != edge.b.z)
                continue; // vias are not described by problem files
            if (original.edge_capacity(edge) <= 0)
                continue;
            const auto it = usage.find(edge);
            candidates.push_back({it == usage.end() ? 0 : it->second, edge});
        }
        if (static_cast<int>(candidates.size()) < spec.reduced_edge_count)
            throw std::invalid_argument(
                "reduced_edge_count exceeds the number of positive-capacity edges");
        std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
            if (a.used != b.used)
                return a.used > b.used;
            return a.edge < b.edge;
        });
        for (int k = 0; k < spec.reduced_edge_count; ++k)
            p.reduced_edges.push_back({candidates[static_cast<size_t>(k)].edge,
                                       spec.reduced_value});
    }
    return p;
}

} // namespace

std::vector<Problem> generate(const GenSpec& spec) {
    validate(spec);
    std::vector<Problem> out;
    out.reserve(static_cast<size_t>(spec.problem_count));
    for (int i = 0; i < spec.problem_count; ++i)
        out.push_back(generate_one(spec, mix_seed(spec.seed, static_cast<std::uint64_t>(i))));
    return out;
}

long long EdgeUtilization::total() const {
    long long sum = 0;
    for (const auto& [edge, used] : usage)
        sum += used;
    return sum;
}

std::map<long long, long long> EdgeUtilization::histogram() const {
    const long long total_edges =
        2LL * height * (width - 1) + 2LL * (height - 1) * width +
        static_cast<long long>(width) * height;
    std::map<long long, long long> hist;
    long long touched = 0;
    for (const auto& [edge, used] : usage) {
        ++hist[used];
        ++touched;
    }
    if (total_edges > touched)
        hist[0] += total_edges - touched;
    return hist;
}

namespace {

std::vector<std::vector<long long>> zero_matrix(int rows, int cols) {
    return std::vector<std::vector<long long>>(static_cast<size_t>(rows),
                                               std::vector<long long>(static_cast<size_t>(cols), 0));
}

} // namespace

std::vector<std::vector<long long>> EdgeUtilization::horizontal_heatmap() const {
    auto m = zero_matrix(height, width - 1);
    for (const auto& [edge, used] : usage)
        if (edge.a.z == edge.b.z && edge.b.x == edge.a.x + 1)
            m[static_cast<size_t>(edge.a.y)][static_cast<size_t>(edge.a.x)] += used;
    return m;
}

std::vector<std::vector<long long>> EdgeUtilization::vertical_heatmap() const {
    auto m = zero_matrix(height - 1, width);
    for (const auto& [edge, used] : usage)
        if (edge.a.z == edge.b.z && edge.b.y == edge.a.y + 1)
            m[static_cast<size_t>(edge.a.y)][static_cast<size_t>(edge.a.x)] += used;
    return m;
}

std::vector<std::vector<long long>> EdgeUtilization::via_heatmap() const {
    auto m = zero_matrix(height, width);
    for (const auto& [edge, used] : usage)
        if (edge.a.z != edge.b.z)
            m[static_cast<size_t>(edge.a.y)][static_cast<size_t>(edge.a.x)] += used;
    return m;
}

EdgeUtilization edge_utilization(const Problem& p, const RouteSolution& s) {
    EdgeUtilization u;
    u.width = p.width;
    u.height = p.height;
    u.usage = edge_usage(p, s);
    return u;
}

namespace {

void append_matrix(std::string& out, const char* name,
                   const std::vector<std::vector<long long>>& m) {
    out += std::string("# ") + name + "\n";
    for (const auto& row : m) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ",";
            out += std::to_string(row[i]);
        }
        out += "\n";
    }
}

} // namespace

std::string heatmap_csv(const EdgeUtilization& u) {
    std::string out;
    append_matrix(out, "horizontal", u.horizontal_heatmap());
    append_matrix(out, "vertical", u.vertical_heatmap());
    append_matrix(out, "via", u.via_heatmap());
    return out;
}

std::string histogram_csv(const EdgeUtilization& u) {
    std::string out = "usage,count\n";
    for (const auto& [used, count] : u.histogram())
        out += std::to_string(used) + "," + std::to_string(count) + "\n";
    return out;
}

} // namespace gridroute
