#pragma once

#include "gridroute/decompose.hpp"
#include "gridroute/grid.hpp"
#include "gridroute/problem.hpp"

#include <array>
#include <vector>

namespace gridroute {

// Observation vector: agent (x,y,z), signed goal offset (dx,dy,dz), then the
// current capacities of the six outgoing edges in action-code order, with 0
// for out-of-bounds directions.
using EnvState = std::array<double, 12>;

inline constexpr int kStateDim = 12;
inline constexpr int kStateCapOffset = 6;

EnvState make_state(const GridGraph& g, const Gcell& agent, const Gcell& goal);

// Actions that stay in bounds and whose edge has positive capacity, derived
// from the observation alone (out-of-bounds directions encode capacity 0).
std::vector<Action> legal_actions_from_state(const EnvState& s);

struct Transition {
    EnvState state;
    Action action;
    double reward;
    EnvState next_state;
    bool is_terminal; // true iff next_state is at the goal pin
};

inline constexpr double kGoalReward = 100.0;
inline constexpr double kStepReward = -1.0;

struct EpisodeConfig {
    int t_max = 50; // per-task step limit
};

// Sequential routing environment over one problem. An episode restores the
// grid to the problem's original capacities and then presents the two-pin
// tasks in decomposition order; capacity consumption accumulates across
// tasks within the episode.
class RoutingEnv {
public:
    RoutingEnv(const Problem& p, EpisodeConfig cfg, const GridOptions& opts = {});

    // Restores all capacities to the problem originals.
    void begin_episode();

    // Starts a two-pin attempt; the agent is placed at task.start.
    EnvState reset(const TwoPinTask& task);

    // Legal actions at the agent's current cell.
    std::vector<Action> legal_actions() const;

    EnvState observe() const;

    struct StepResult {
        EnvState state;
        double reward;
        bool done;
        bool reached_goal;
    };

    // Moves the agent, consumes the crossed edge, and scores the move.
    // The action must be legal; callers mask with legal_actions().
    // done is set on reaching the goal, on the t_max-th step, or when the
    // new cell has no legal action left (dead end).
    StepResult step(Action a);

    const GridGraph& grid() const { return grid_; }
    const Gcell& agent() const { return agent_; }
    const Gcell& goal() const { return goal_; }
    int steps_taken() const { return steps_; }
    int t_max() const { return cfg_.t_max; }
    bool task_active() const { return active_; }

private:
    EpisodeConfig cfg_;
    GridGraph grid_;
    GridGraph pristine_;
    Gcell agent_;
    Gcell goal_;
    int steps_ = 0;
    bool active_ = false;
};

} // namespace gridroute
