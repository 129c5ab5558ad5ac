#include "gridroute/env.hpp"

#include <stdexcept>

namespace gridroute {

EnvState make_state(const GridGraph& g, const Gcell& agent, const Gcell& goal) {
    EnvState s{};
    s[0] = agent.x;
    s[1] = agent.y;
    s[2] = agent.z;
    s[3] = goal.x - agent.x;
    s[4] = goal.y - agent.y;
    s[5] = goal.z - agent.z;
    for (int code = 0; code < kActionCount; ++code) {
        const auto a = static_cast<Action>(code);
        s[kStateCapOffset + code] =
            g.move_in_bounds(agent, a) ? g.edge_capacity(agent, a) : 0.0;
    }
    return s;
}

std::vector<Action> legal_actions_from_state(const EnvState& s) {
    std::vector<Action> out;
    out.reserve(kActionCount);
    for (int code = 0; code < kActionCount; ++code)
        if (s[kStateCapOffset + code] > 0.0)
            out.push_back(static_cast<Action>(code));
    return out;
}

RoutingEnv::RoutingEnv(const Problem& p, EpisodeConfig cfg, const GridOptions& opts)
    : cfg_(cfg), grid_(GridGraph::from_problem(p, opts)), pristine_(grid_) {
    if (cfg_.t_max < 1)
        throw std::invalid_argument("t_max must be at least 1");
}

void RoutingEnv::begin_episode() {
    grid_.restore(pristine_);
    active_ = false;
}

EnvState RoutingEnv::reset(const TwoPinTask& task) {
    if (!grid_.in_bounds(task.start) || !grid_.in_bounds(task.goal))
        throw std::invalid_argument("task endpoints out of bounds");
    agent_ = task.start;
    goal_ = task.goal;
    steps_ = 0;
    active_ = true;
    return observe();
}

std::vector<Action> RoutingEnv::legal_actions() const {
    std::vector<Action> out;
    out.reserve(kActionCount);
    for (int code = 0; code < kActionCount; ++code) {
        const auto a = static_cast<Action>(code);
        if (grid_.move_in_bounds(agent_, a) && grid_.edge_capacity(agent_, a) > 0)
            out.push_back(a);
    }
    return out;
}

EnvState RoutingEnv::observe() const { return make_state(grid_, agent_, goal_); }

RoutingEnv::StepResult RoutingEnv::step(Action a) {
    if (!active_)
        throw std::logic_error("step() without an active task");
    if (!grid_.move_in_bounds(agent_, a) || grid_.edge_capacity(agent_, a) <= 0)
        throw std::invalid_argument("illegal action; callers must mask with legal_actions()");

    grid_.cross_edge(agent_, a);
    agent_ = moved(agent_, a);
    ++steps_;

    StepResult res;
    res.reached_goal = agent_ == goal_;
    if (res.reached_goal) {
        res.reward = kGoalReward;
        res.done = true;
    } else {
        res.reward = kStepReward;
        res.done = steps_ >= cfg_.t_max || legal_actions().empty();
    }
    res.state = observe();
    if (res.done)
        active_ = false;
    return res;
}

} // namespace gridroute
