#pragma once

#include "gridroute/env.hpp"
#include "gridroute/problem.hpp"
#include "gridroute/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gridroute {

// Value network: 12 -> 32 -> 64 -> 32 -> 6, ReLU after each hidden layer,
// linear output. Parameters live in one flat vector, layer-major with each
// weight matrix row-major [out][in] followed by its bias.
class QNetwork {
public:
    static constexpr std::array<int, 5> kDims = {12, 32, 64, 32, 6};
    static constexpr int kLayerCount = 4;

    QNetwork(); // all parameters zero
    // Weights uniform in +-1/sqrt(fan_in), biases zero, seeded.
    explicit QNetwork(Rng& rng);

    std::array<double, 6> forward(const EnvState& s) const;

    // Mean-squared-error loss of Q(s_j, a_j) against fixed targets y_j, and
    // its gradient with respect to every parameter (accumulated into grad,
    // which is zeroed first). Targets are treated as constants.
    double loss_and_gradient(std::span<const Transition* const> batch,
                             std::span<const double> targets,
                             std::vector<double>& grad) const;

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }
    static size_t param_count();

    // Offset of layer l's weight matrix / bias inside params().
    static size_t weight_offset(int layer);
    static size_t bias_offset(int layer);

private:
    std::vector<double> params_;
};

// Serialized network layout: "GRQW" magic, u32 version, u32 layer count,
// then per layer u32 in, u32 out, f64 weights (row-major), f64 biases.
// Little-endian throughout.
void save_weights(const QNetwork& net, const std::string& path);
QNetwork load_weights(const std::string& path);

// Bounded FIFO of transitions; once full, the oldest record is evicted.
class ReplayBuffer {
public:
    explicit ReplayBuffer(size_t capacity);

    void push(const Transition& t);
    size_t size() const { return size_; }
    size_t capacity() const { return capacity_; }
    const Transition& at(size_t logical_index) const; // 0 = oldest

    // Uniform sample of k distinct records (without replacement). k must
    // not exceed size().
    void sample(size_t k, Rng& rng, std::vector<const Transition*>& out) const;

private:
    size_t capacity_;
    size_t head_ = 0; // next slot to overwrite
    size_t size_ = 0;
    std::vector<Transition> slots_;
};

// Epsilon-greedy over the legal action set: with probability eps a uniform
// legal action, otherwise the legal action with the highest Q-value (ties
// to the lowest action code). eps == 0 draws nothing from the rng.
Action select_action(const QNetwork& net, const EnvState& s, double eps,
                     const std::vector<Action>& legal, Rng& rng);

enum class OptimizerKind { Adam, Sgd };

// Gradient-step engine. Adam uses decay rates 0.9/0.999 and stability
// epsilon 1e-8; Sgd is the plain update.
class Optimizer {
public:
    Optimizer(OptimizerKind kind, double learning_rate);
    void apply(std::vector<double>& params, const std::vector<double>& grad);
    OptimizerKind kind() const { return kind_; }

private:
    OptimizerKind kind_;
    double lr_;
    long long step_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
};

// One training step: targets are r for terminal transitions and
// r + gamma * max Q(next, a') over the next state's legal actions
// otherwise, computed from the same, live network (no target network).
// A dead-end next state contributes no future value. One optimizer step on
// the mean-squared error. Returns the loss; throws on a non-finite loss.
double train_batch(QNetwork& net, std::span<const Transition* const> batch, double gamma,
                   Optimizer& opt);
double train_batch(QNetwork& net, const std::vector<Transition>& batch, double gamma,
                   Optimizer& opt);

enum class BurnInMode { AStar, Random };

struct TrainConfig {
    double learning_rate = 1e-4;
    int batch_size = 32;
    int buffer_size = 50000;
    int burn_in_size = 10000;
    double gamma = 0.9; // tuned optimum; see README
    double epsilon = 0.05;
    int max_episodes = 5000;
    int t_max = 50;
    BurnInMode burn_in = BurnInMode::AStar;
    OptimizerKind optimizer = OptimizerKind::Adam;
    // Linear decay of epsilon to 0.01 starting at episode 2000. Off by
    // default; kept for experiments.
    bool epsilon_decay = false;
    std::uint64_t seed = 0;
};

// Per-task outcome hook, called once per two-pin attempt.
struct TaskOutcome {
    int episode;
    int task_index;
    int steps;
    double cumulative_reward;
    bool success;
};
using TaskObserver = std::function<void(const TaskOutcome&)>;

struct TrainResult {
    QNetwork network;
    std::vector<double> episode_rewards;      // summed task rewards per episode
    std::vector<std::uint8_t> episode_success; // 1 iff every task reached its goal
    // Best full solution over all all-success episodes, by (OF, WL); empty
    // when no episode ever solved every task.
    std::optional<RouteSolution> best_solution;
    int best_episode = -1;
    long long best_wl = 0;
    long long best_of = 0;
};

// Trains one network on one problem: burns in the replay buffer (from the
// sequential router's transitions or from random legal walks), then runs
// epsilon-greedy episodes over the decomposed task list with one train_batch
// step per environment step.
TrainResult train(const Problem& p, const TrainConfig& cfg,
                  const TaskObserver& observer = {});

std::string reward_curve_csv(const TrainResult& r);

} // namespace gridroute
