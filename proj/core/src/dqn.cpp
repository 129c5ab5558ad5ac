#include "gridroute/dqn.hpp"

#include "gridroute/astar.hpp"
#include "gridroute/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace gridroute {

namespace {

constexpr std::array<int, 5> kD = QNetwork::kDims;

struct LayerLayout {
    size_t w_off, b_off;
    int in, out;
};

constexpr std::array<LayerLayout, 4> layer_layouts() {
    std::array<LayerLayout, 4> ls{};
    size_t off = 0;
    for (int l = 0; l < 4; ++l) {
        ls[l].in = kD[l];
        ls[l].out = kD[l + 1];
        ls[l].w_off = off;
        off += static_cast<size_t>(kD[l]) * kD[l + 1];
        ls[l].b_off = off;
        off += static_cast<size_t>(kD[l + 1]);
    }
    return ls;
}

constexpr auto kLayers = layer_layouts();
constexpr size_t kParamCount =
    kLayers[3].b_off + static_cast<size_t>(kLayers[3].out);

// y = W x + b, optionally rectified.
inline void affine(const double* w, const double* b, const double* x, int in, int out,
                   bool relu, double* y) {
    for (int o = 0; o < out; ++o) {
        double acc = b[o];
        const double* row = w + static_cast<size_t>(o) * in;
        for (int i = 0; i < in; ++i)
            acc += row[i] * x[i];
        y[o] = relu && acc < 0.0 ? 0.0 : acc;
    }
}

} // namespace

QNetwork::QNetwork() : params_(kParamCount, 0.0) {}

QNetwork::QNetwork(Rng& rng) : params_(kParamCount, 0.0) {
    for (const auto& l : kLayers) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(l.in));
        double* w = params_.data() + l.w_off;
        for (size_t i = 0; i < static_cast<size_t>(l.in) * l.out; ++i)
            w[i] = (rng.unit() * 2.0 - 1.0) * scale;
        // biases stay zero
    }
}

size_t QNetwork::param_count() { return kParamCount; }
size_t QNetwork::weight_offset(int layer) { return kLayers[static_cast<size_t>(layer)].w_off; }
size_t QNetwork::bias_offset(int layer) { return kLayers[static_cast<size_t>(layer)].b_off; }

std::array<double, 6> QNetwork::forward(const EnvState& s) const {
    double buf_a[64], buf_b[64];
    const double* p = params_.data();

    affine(p + kLayers[0].w_off, p + kLayers[0].b_off, s.data(), kLayers[0].in,
           kLayers[0].out, true, buf_a);
    affine(p + kLayers[1].w_off, p + kLayers[1].b_off, buf_a, kLayers[1].in,
           kLayers[1].out, true, buf_b);
    affine(p + kLayers[2].w_off, p + kLayers[2].b_off, buf_b, kLayers[2].in,
           kLayers[2].out, true, buf_a);

    std::array<double, 6> q;
    affine(p + kLayers[3].w_off, p + kLayers[3].b_off, buf_a, kLayers[3].in,
           kLayers[3].out, false, q.data());
    return q;
}

double QNetwork::loss_and_gradient(std::span<const Transition* const> batch,
                                   std::span<const double> targets,
                                   std::vector<double>& grad) const {
    if (batch.empty())
        throw std::invalid_argument("empty batch");
    if (batch.size() != targets.size())
        throw std::invalid_argument("batch/target size mismatch");
    grad.assign(kParamCount, 0.0);

    const double* p = params_.data();
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;

    // Per-sample activations; widths are bounded by the largest layer.
    double a1[32], a2[64], a3[32], q[6];
    double d1[32], d2[64], d3[32], dq[6];

    for (size_t j = 0; j < batch.size(); ++j) {
        const EnvState& x = batch[j]->state;
        affine(p + kLayers[0].w_off, p + kLayers[0].b_off, x.data(), 12, 32, true, a1);
        affine(p + kLayers[1].w_off, p + kLayers[1].b_off, a1, 32, 64, true, a2);
        affine(p + kLayers[2].w_off, p + kLayers[2].b_off, a2, 64, 32, true, a3);
        affine(p + kLayers[3].w_off, p + kLayers[3].b_off, a3, 32, 6, false, q);

        const int a = action_code(batch[j]->action);
        const double err = q[a] - targets[j];
        loss += err * err * inv_n;

        // d(mean squared error)/dq, nonzero only at the taken action.
        std::fill(dq, dq + 6, 0.0);
        dq[a] = 2.0 * err * inv_n;

        // Output layer.
        {
            const LayerLayout& l = kLayers[3];
            double* gw = grad.data() + l.w_off;
            double* gb = grad.data() + l.b_off;
            const double* w = p + l.w_off;
            std::fill(d3, d3 + 32, 0.0);
            for (int o = 0; o < 6; ++o) {
                const double d = dq[o];
                if (d == 0.0)
                    continue;
                gb[o] += d;
                double* gw_row = gw + static_cast<size_t>(o) * 32;
                const double* w_row = w + static_cast<size_t>(o) * 32;
                for (int i = 0; i < 32; ++i) {
                    gw_row[i] += d * a3[i];
                    d3[i] += d * w_row[i];
                }
            }
        }
        // Hidden layers, ReLU mask taken from the cached activations.
        {
            const LayerLayout& l = kLayers[2];
            double* gw = grad.data() + l.w_off;
            double* gb = grad.data() + l.b_off;
            const double* w = p + l.w_off;
            std::fill(d2, d2 + 64, 0.0);
            for (int o = 0; o < 32; ++o) {
                const double d = a3[o] > 0.0 ? d3[o] : 0.0;
                if (d == 0.0)
                    continue;
                gb[o] += d;
                double* gw_row = gw + static_cast<size_t>(o) * 64;
                const double* w_row = w + static_cast<size_t>(o) * 64;
                for (int i = 0; i < 64; ++i) {
                    gw_row[i] += d * a2[i];
                    d2[i] += d * w_row[i];
                }
            }
        }
        {
            const LayerLayout& l = kLayers[1];
            double* gw = grad.data() + l.w_off;
            double* gb = grad.data() + l.b_off;
            const double* w = p + l.w_off;
            std::fill(d1, d1 + 32, 0.0);
            for (int o = 0; o < 64; ++o) {
                const double d = a2[o] > 0.0 ? d2[o] : 0.0;
                if (d == 0.0)
                    continue;
                gb[o] += d;
                double* gw_row = gw + static_cast<size_t>(o) * 32;
                const double* w_row = w + static_cast<size_t>(o) * 32;
                for (int i = 0; i < 32; ++i) {
                    gw_row[i] += d * a1[i];
                    d1[i] += d * w_row[i];
                }
            }
        }
        {
            const LayerLayout& l = kLayers[0];
            double* gw = grad.data() + l.w_off;
            double* gb = grad.data() + l.b_off;
            for (int o = 0; o < 32; ++o) {
                const double d = a1[o] > 0.0 ? d1[o] : 0.0;
                if (d == 0.0)
                    continue;
                gb[o] += d;
                double* gw_row = gw + static_cast<size_t>(o) * 12;
                for (int i = 0; i < 12; ++i)
                    gw_row[i] += d * x[i];
            }
        }
    }
    return loss;
}

void save_weights(const QNetwork& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    const char magic[4] = {'G', 'R', 'Q', 'W'};
    out.write(magic, 4);
    const auto put_u32 = [&](std::uint32_t v) {
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
    };
    put_u32(1);
    put_u32(QNetwork::kLayerCount);
    const auto& p = net.params();
    for (const auto& l : kLayers) {
        put_u32(static_cast<std::uint32_t>(l.in));
        put_u32(static_cast<std::uint32_t>(l.out));
        out.write(reinterpret_cast<const char*>(p.data() + l.w_off),
                  static_cast<std::streamsize>(sizeof(double) * l.in * l.out));
        out.write(reinterpret_cast<const char*>(p.data() + l.b_off),
                  static_cast<std::streamsize>(sizeof(double) * l.out));
    }
    if (!out)
        throw std::runtime_error("failed writing '" + path + "'");
}

QNetwork load_weights(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "GRQW", 4) != 0)
        throw std::runtime_error("'" + path + "' is not a weights file");
    const auto get_u32 = [&] {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof v);
        return v;
    };
    if (get_u32() != 1)
        throw std::runtime_error("unsupported weights file version");
    if (get_u32() != QNetwork::kLayerCount)
        throw std::runtime_error("unexpected layer count");
    QNetwork net;
    auto& p = net.params();
    for (const auto& l : kLayers) {
        if (get_u32() != static_cast<std::uint32_t>(l.in) ||
            get_u32() != static_cast<std::uint32_t>(l.out))
            throw std::runtime_error("weights file does not match the 12-32-64-32-6 network");
        in.read(reinterpret_cast<char*>(p.data() + l.w_off),
                static_cast<std::streamsize>(sizeof(double) * l.in * l.out));
        in.read(reinterpret_cast<char*>(p.data() + l.b_off),
                static_cast<std::streamsize>(sizeof(double) * l.out));
    }
    if (!in)
        throw std::runtime_error("truncated weights file");
    return net;
}

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0)
        throw std::invalid_argument("replay buffer capacity must be positive");
    slots_.resize(capacity_);
}

void ReplayBuffer::push(const Transition& t) {
    slots_[head_] = t;
    head_ = (head_ + 1) % capacity_;
    if (size_ < capacity_)
        ++size_;
}

const Transition& ReplayBuffer::at(size_t logical_index) const {
    if (logical_index >= size_)
        throw std::out_of_range("replay buffer index");
    const size_t oldest = (head_ + capacity_ - size_) % capacity_;
    return slots_[(oldest + logical_index) % capacity_];
}

void ReplayBuffer::sample(size_t k, Rng& rng, std::vector<const Transition*>& out) const {
    if (k > size_)
        throw std::invalid_argument("sample size exceeds buffer size");
    out.clear();
    out.reserve(k);
    // Floyd's sampling: k distinct logical indices, uniform.
    thread_local std::vector<size_t> picked;
    picked.clear();
    picked.reserve(k);
    for (size_t j = size_ - k; j < size_; ++j) {
        const size_t t = rng.below(j + 1);
        const bool seen = std::find(picked.begin(), picked.end(), t) != picked.end();
        picked.push_back(seen ? j : t);
    }
    for (const size_t idx : picked)
        out.push_back(&at(idx));
}

Action select_action(const QNetwork& net, const EnvState& s, double eps,
                     const std::vector<Action>& legal, Rng& rng) {
    if (legal.empty())
        throw std::invalid_argument("select_action with no legal action");
    if (eps > 0.0 && rng.unit() < eps)
        return legal[rng.below(legal.size())];
    const auto q = net.forward(s);
    Action best = legal[0];
    double best_q = q[static_cast<size_t>(action_code(best))];
    for (const Action a : legal) {
        const double qa = q[static_cast<size_t>(action_code(a))];
        if (qa > best_q) { // strict: ties keep the lowest action code
            best_q = qa;
            best = a;
        }
    }
    return best;
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate)
    : kind_(kind), lr_(learning_rate) {
    if (lr_ <= 0.0)
        throw std::invalid_argument("learning rate must be positive");
}

void Optimizer::apply(std::vector<double>& params, const std::vector<double>& grad) {
    if (params.size() != grad.size())
        throw std::invalid_argument("parameter/gradient size mismatch");
    if (kind_ == OptimizerKind::Sgd) {
        for (size_t i = 0; i < params.size(); ++i)
            params[i] -= lr_ * grad[i];
        return;
    }
    constexpr double beta1 = 0.9, beta2 = 0.999, stab = 1e-8;
    if (m_.size() != params.size()) {
        m_.assign(params.size(), 0.0);
        v_.assign(params.size(), 0.0);
    }
    ++step_;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_));
    for (size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1 * m_[i] + (1.0 - beta1) * grad[i];
        v_[i] = beta2 * v_[i] + (1.0 - beta2) * grad[i] * grad[i];
        params[i] -= lr_ * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + stab);
    }
}

double train_batch(QNetwork& net, std::span<const Transition* const> batch, double gamma,
                   Optimizer& opt) {
    thread_local std::vector<double> targets;
    thread_local std::vector<double> grad;
    targets.clear();
    targets.reserve(batch.size());
    for (const Transition* t : batch) {
        if (t->is_terminal) {
            targets.push_back(t->reward);
            continue;
        }
        // Bootstrap over the actions actually available in the next state
        // (legality is encoded in the observation's capacity entries).
        // Maximizing over masked actions instead feeds back Q-values that
        // are never trained and sends the value estimates unbounded.
        // A dead-end next state has no continuation value.
        const auto q = net.forward(t->next_state);
        double best = 0.0;
        bool any = false;
        for (int code = 0; code < kActionCount; ++code) {
            if (t->next_state[kStateCapOffset + code] <= 0.0)
                continue;
            const double v = q[static_cast<size_t>(code)];
            if (!any || v > best) {
                best = v;
                any = true;
            }
        }
        targets.push_back(t->reward + gamma * best);
    }
    const double loss = net.loss_and_gradient(batch, targets, grad);
    if (!std::isfinite(loss))
        throw std::runtime_error("training diverged: non-finite loss");
    opt.apply(net.params(), grad);
    return loss;
}

double train_batch(QNetwork& net, const std::vector<Transition>& batch, double gamma,
                   Optimizer& opt) {
    std::vector<const Transition*> ptrs;
    ptrs.reserve(batch.size());
    for (const auto& t : batch)
        ptrs.push_back(&t);
    return train_batch(net, ptrs, gamma, opt);
}

namespace {

void validate(const TrainConfig& cfg) {
    if (cfg.gamma < 0.0 || cfg.gamma > 1.0)
        throw std::invalid_argument("gamma must be in [0, 1]");
    if (cfg.epsilon < 0.0 || cfg.epsilon > 1.0)
        throw std::invalid_argument("epsilon must be in [0, 1]");
    if (cfg.batch_size < 1)
        throw std::invalid_argument("batch_size must be at least 1");
    if (cfg.burn_in_size < cfg.batch_size)
        throw std::invalid_argument("burn_in_size must be at least batch_size");
    if (cfg.buffer_size < cfg.burn_in_size)
        throw std::invalid_argument("buffer_size must be at least burn_in_size");
    if (cfg.max_episodes < 1)
        throw std::invalid_argument("max_episodes must be at least 1");
    if (cfg.t_max < 1)
        throw std::invalid_argument("t_max must be at least 1");
}

double effective_epsilon(const TrainConfig& cfg, int episode) {
    constexpr int kDecayStart = 2000;
    constexpr double kDecayFloor = 0.01;
    if (!cfg.epsilon_decay || episode < kDecayStart || cfg.max_episodes <= kDecayStart ||
        cfg.epsilon <= kDecayFloor)
        return cfg.epsilon;
    const double span = static_cast<double>(cfg.max_episodes - 1 - kDecayStart);
    const double frac =
        span <= 0.0 ? 1.0 : static_cast<double>(episode - kDecayStart) / span;
    return cfg.epsilon + (kDecayFloor - cfg.epsilon) * std::min(1.0, frac);
}

// Burn-in from the sequential router: its walk re-expressed as environment
// transitions, minus any move the environment would have masked (crossings
// of already-depleted edges), cycled until the buffer quota is met.
void burn_in_astar(ReplayBuffer& buffer, const Problem& p, int burn_in_size) {
    const auto routed = route_problem(p);
    std::vector<Transition> usable;
    usable.reserve(routed.transitions.size());
    for (const auto& t : routed.transitions)
        if (t.state[kStateCapOffset + action_code(t.action)] > 0.0)
            usable.push_back(t);
    if (usable.empty())
        throw std::runtime_error("burn-in failed: router produced no maskable transitions");
    for (int i = 0; i < burn_in_size; ++i)
        buffer.push(usable[static_cast<size_t>(i) % usable.size()]);
}

// Burn-in from uniform random legal walks over whole episode passes.
void burn_in_random(ReplayBuffer& buffer, RoutingEnv& env,
                    const std::vector<TwoPinTask>& tasks, int burn_in_size, Rng& rng) {
    int pushed = 0;
    while (pushed < burn_in_size) {
        env.begin_episode();
        int pushed_this_pass = 0;
        for (const auto& task : tasks) {
            EnvState s = env.reset(task);
            for (;;) {
                const auto legal = env.legal_actions();
                if (legal.empty())
                    break;
                const Action a = legal[rng.below(legal.size())];
                const auto res = env.step(a);
                buffer.push({s, a, res.reward, res.state, res.reached_goal});
                ++pushed;
                ++pushed_this_pass;
                s = res.state;
                if (res.done)
                    break;
            }
            if (pushed >= burn_in_size)
                return;
        }
        if (pushed_this_pass == 0)
            throw std::runtime_error("burn-in failed: no legal moves anywhere");
    }
}

} // namespace

TrainResult train(const Problem& p, const TrainConfig& cfg, const TaskObserver& observer) {
    validate(cfg);

    // Single deterministic stream: network init first, then burn-in walks,
    // then the per-step exploration and batch-sampling draws.
    Rng rng(cfg.seed);
    TrainResult result{QNetwork(rng), {}, {}, std::nullopt, -1, 0, 0};

    // Tasks with their owning net's position in the problem (net ids are
    // not required to be dense).
    struct IndexedTask {
        size_t net_index;
        TwoPinTask task;
    };
    std::vector<IndexedTask> tasks;
    for (size_t n = 0; n < p.nets.size(); ++n)
        for (const auto& t : decompose(p.nets[n]))
            tasks.push_back({n, t});
    for (size_t i = 0; i < tasks.size(); ++i)
        tasks[i].task.order_index = static_cast<int>(i);

    RoutingEnv env(p, EpisodeConfig{cfg.t_max});
    ReplayBuffer buffer(static_cast<size_t>(cfg.buffer_size));
    if (cfg.burn_in == BurnInMode::AStar)
        burn_in_astar(buffer, p, cfg.burn_in_size);
    else
        burn_in_random(buffer, env, [&] {
            std::vector<TwoPinTask> ts;
            ts.reserve(tasks.size());
            for (const auto& it : tasks)
                ts.push_back(it.task);
            return ts;
        }(), cfg.burn_in_size, rng);

    Optimizer opt(cfg.optimizer, cfg.learning_rate);
    std::vector<const Transition*> batch;
    std::vector<std::vector<Segment>> episode_segments(p.nets.size());

    result.episode_rewards.reserve(static_cast<size_t>(cfg.max_episodes));
    result.episode_success.reserve(static_cast<size_t>(cfg.max_episodes));

    for (int episode = 0; episode < cfg.max_episodes; ++episode) {
        const double eps = effective_epsilon(cfg, episode);
        env.begin_episode();
        for (auto& segs : episode_segments)
            segs.clear();

        double episode_reward = 0.0;
        bool all_success = true;

        for (const auto& [net_index, task] : tasks) {
            EnvState s = env.reset(task);
            double task_reward = 0.0;
            int steps = 0;
            bool success = false;
            for (;;) {
                const auto legal = env.legal_actions();
                if (legal.empty())
                    break; // dead end before moving
                const Action a = select_action(result.network, s, eps, legal, rng);
                const Gcell from = env.agent();
                const auto res = env.step(a);
                buffer.push({s, a, res.reward, res.state, res.reached_goal});
                episode_segments[net_index].emplace_back(from, env.agent());
                task_reward += res.reward;
                ++steps;

                buffer.sample(static_cast<size_t>(cfg.batch_size), rng, batch);
                train_batch(result.network, batch, cfg.gamma, opt);

                s = res.state;
                if (res.done) {
                    success = res.reached_goal;
                    break;
                }
            }
            episode_reward += task_reward;
            if (observer)
                observer({episode, task.order_index, steps, task_reward, success});
            if (!success)
                all_success = false;
        }

        result.episode_rewards.push_back(episode_reward);
        result.episode_success.push_back(all_success ? 1 : 0);

        if (all_success) {
            RouteSolution sol;
            sol.nets.reserve(p.nets.size());
            for (size_t n = 0; n < p.nets.size(); ++n)
                sol.nets.push_back({p.nets[n].name, p.nets[n].id, episode_segments[n]});
            const long long wl = wirelength(sol);
            const long long of = overflow(p, sol);
            if (!result.best_solution || of < result.best_of ||
                (of == result.best_of && wl < result.best_wl)) {
                result.best_solution = std::move(sol);
                result.best_episode = episode;
                result.best_wl = wl;
                result.best_of = of;
            }
        }
    }
    return result;
}

std::string reward_curve_csv(const TrainResult& r) {
    std::string out = "episode,reward\n";
    char buf[64];
    for (size_t i = 0; i < r.episode_rewards.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, r.episode_rewards[i]);
        out += buf;
    }
    return out;
}

} // namespace gridroute
