#include "driftwalk/simulator.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace driftwalk {

namespace {

// Runs fn(i) for i in [0, count), spreading indices over `threads` workers.
// Work per index must not depend on execution order.
template <class Fn>
void run_indexed(int64_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int64_t> next{0};
    std::vector<std::thread> pool;
    const int workers = static_cast<int>(std::min<int64_t>(threads, count));
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (int64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

template <class Seq>
MeanStderr mean_stderr(const Seq& xs) {
    MeanStderr out;
    const size_t n = xs.size();
    if (n == 0) return out;
    double sum = 0.0;
    for (double x : xs) sum += x;
    out.mean = sum / static_cast<double>(n);
    if (n < 2) return out;
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
    return out;
}

}  // namespace

WalkSummary run_walk(const LineEnvironment& env, int64_t start, int64_t steps, uint64_t seed,
                     bool record_path) {
    if (steps < 0) throw std::invalid_argument("steps must be >= 0");
    Xoshiro256pp rng = Xoshiro256pp::seeded(seed);
    WalkSummary out;
    out.final_pos = out.min_pos = out.max_pos = start;
    if (record_path) {
        out.path.reserve(static_cast<size_t>(steps) + 1);
        out.path.push_back(start);
    }
    int64_t x = start;
    for (int64_t n = 0; n < steps; ++n) {
        x += rng.uniform01() < env.right_prob_f(x) ? 1 : -1;
        if (x < out.min_pos) out.min_pos = x;
        if (x > out.max_pos) out.max_pos = x;
        if (record_path) out.path.push_back(x);
    }
    out.final_pos = x;
    out.steps_taken = steps;
    return out;
}

WalkSummary run_walk(const FiniteEnvironment& env, int64_t start, int64_t steps, uint64_t seed,
                     bool record_path) {
    if (steps < 0) throw std::invalid_argument("steps must be >= 0");
    if (start < 0 || start > env.N()) throw std::invalid_argument("start outside [0, N]");
    const std::vector<double> table = env.prob_table();
    Xoshiro256pp rng = Xoshiro256pp::seeded(seed);
    WalkSummary out;
    out.final_pos = out.min_pos = out.max_pos = start;
    if (record_path) out.path.push_back(start);
    int64_t x = start;
    for (int64_t n = 0; n < steps && x != env.N(); ++n) {
        x += rng.uniform01() < table[static_cast<size_t>(x)] ? 1 : -1;
        if (x < out.min_pos) out.min_pos = x;
        if (x > out.max_pos) out.max_pos = x;
        if (record_path) out.path.push_back(x);
        out.steps_taken = n + 1;
    }
    out.final_pos = x;
    return out;
}

namespace {

std::optional<int64_t> hit_segment(const std::vector<double>& table, int64_t target,
                                   uint64_t seed, int64_t cap) {
    Xoshiro256pp rng = Xoshiro256pp::seeded(seed);
    int64_t x = 0;
    for (int64_t t = 0; t < cap; ++t) {
        if (x == target) return t;
        x += rng.uniform01() < table[static_cast<size_t>(x)] ? 1 : -1;
    }
    return x == target ? std::optional<int64_t>(cap) : std::nullopt;
}

}  // namespace

std::optional<int64_t> sample_hitting_time(const FiniteEnvironment& env, uint64_t seed,
                                           int64_t cap) {
    if (cap < 0) throw std::invalid_argument("cap must be >= 0");
    return hit_segment(env.prob_table(), env.N(), seed, cap);
}

std::optional<int64_t> sample_hitting_time(const LineEnvironment& env, int64_t start,
                                           int64_t target, uint64_t seed, int64_t cap) {
    if (cap < 0) throw std::invalid_argument("cap must be >= 0");
    Xoshiro256pp rng = Xoshiro256pp::seeded(seed);
    int64_t x = start;
    for (int64_t t = 0; t < cap; ++t) {
        if (x == target) return t;
        x += rng.uniform01() < env.right_prob_f(x) ? 1 : -1;
    }
    return x == target ? std::optional<int64_t>(cap) : std::nullopt;
}

HittingTimeStats sample_hitting_times(const FiniteEnvironment& env, int64_t reps,
                                      uint64_t master_seed, int64_t cap, int threads) {
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    if (cap < 0) throw std::invalid_argument("cap must be >= 0");
    const std::vector<double> table = env.prob_table();
    HittingTimeStats stats;
    stats.reps = reps;
    stats.master_seed = master_seed;
    stats.cap = cap;
    stats.samples.assign(static_cast<size_t>(reps), -1);
    run_indexed(reps, threads, [&](int64_t i) {
        const auto t =
            hit_segment(table, env.N(), derive_stream_seed(master_seed, static_cast<uint64_t>(i)),
                        cap);
        if (t) stats.samples[static_cast<size_t>(i)] = *t;
    });
    std::vector<double> completed;
    completed.reserve(stats.samples.size());
    for (int64_t s : stats.samples)
        if (s >= 0) completed.push_back(static_cast<double>(s));
    stats.completed = static_cast<int64_t>(completed.size());
    stats.capped = reps - stats.completed;
    const MeanStderr ms = mean_stderr(completed);
    stats.mean = ms.mean;
    stats.stderr_ = ms.stderr_;
    return stats;
}

SpeedEstimate estimate_speed(const LineEnvironment& env, int64_t steps, int64_t reps,
                             uint64_t master_seed, int threads) {
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    SpeedEstimate est;
    est.steps = steps;
    est.reps = reps;
    est.master_seed = master_seed;
    est.values.assign(static_cast<size_t>(reps), 0.0);
    run_indexed(reps, threads, [&](int64_t i) {
        const WalkSummary w =
            run_walk(env, 0, steps, derive_stream_seed(master_seed, static_cast<uint64_t>(i)));
        est.values[static_cast<size_t>(i)] =
            static_cast<double>(w.final_pos) / static_cast<double>(steps);
    });
    const MeanStderr ms = mean_stderr(est.values);
    est.mean = ms.mean;
    est.stderr_ = ms.stderr_;
    return est;
}

SpeedEstimate estimate_iid_speed(const Probability& p, const Rational& lambda, int64_t steps,
                                 int64_t reps, uint64_t master_seed, int threads) {
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    SpeedEstimate est;
    est.steps = steps;
    est.reps = reps;
    est.master_seed = master_seed;
    est.values.assign(static_cast<size_t>(reps), 0.0);
    run_indexed(reps, threads, [&](int64_t i) {
        const uint64_t env_seed = derive_stream_seed(master_seed, 2 * static_cast<uint64_t>(i));
        const uint64_t walk_seed =
            derive_stream_seed(master_seed, 2 * static_cast<uint64_t>(i) + 1);
        const LineEnvironment env = LineEnvironment::iid_sample(p, lambda, steps, env_seed);
        const WalkSummary w = run_walk(env, 0, steps, walk_seed);
        est.values[static_cast<size_t>(i)] =
            static_cast<double>(w.final_pos) / static_cast<double>(steps);
    });
    const MeanStderr ms = mean_stderr(est.values);
    est.mean = ms.mean;
    est.stderr_ = ms.stderr_;
    return est;
}

CoupledRun coupled_run(const LineEnvironment& lower, const LineEnvironment& upper,
                       int64_t steps, uint64_t seed) {
    if (steps < 0) throw std::invalid_argument("steps must be >= 0");
    Xoshiro256pp rng = Xoshiro256pp::seeded(seed);
    std::unordered_set<int64_t> checked;
    const auto check_ordering = [&](int64_t site) {
        if (!checked.insert(site).second) return;
        if (lower.right_prob(site) > upper.right_prob(site))
            throw std::invalid_argument("environments are not pointwise ordered at site " +
                                        std::to_string(site));
    };

    CoupledRun out;
    out.lower_path.reserve(static_cast<size_t>(steps) + 1);
    out.upper_path.reserve(static_cast<size_t>(steps) + 1);
    int64_t lo = 0, hi = 0;
    out.lower_path.push_back(lo);
    out.upper_path.push_back(hi);
    out.dominated = true;
    for (int64_t n = 0; n < steps; ++n) {
        check_ordering(lo);
        check_ordering(hi);
        const double u = rng.uniform01();  // one uniform drives both walks
        lo += u < lower.right_prob_f(lo) ? 1 : -1;
        hi += u < upper.right_prob_f(hi) ? 1 : -1;
        out.lower_path.push_back(lo);
        out.upper_path.push_back(hi);
        if (hi < lo && out.dominated) {
            out.dominated = false;
            out.first_violation = n + 1;
        }
    }
    return out;
}

TransienceReport transience_stat(const LineEnvironment& env, int64_t depth) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    TransienceReport rep;
    rep.partial_sums.reserve(static_cast<size_t>(depth));
    double product = 1.0;
    double sum = 0.0;
    for (int64_t j = 1; j <= depth; ++j) {
        const double w = env.right_prob_f(j);
        product *= w > 0.0 ? (1.0 - w) / w : std::numeric_limits<double>::infinity();
        sum += product;
        rep.partial_sums.push_back(sum);
    }
    rep.last_term = product;

    if (rep.last_term < 1e-12) {
        rep.verdict = TransienceVerdict::FiniteLooking;
    } else {
        const size_t half = rep.partial_sums.size() / 2;
        const double growth =
            (rep.partial_sums.back() - rep.partial_sums[half]) /
            std::max<double>(1.0, static_cast<double>(rep.partial_sums.size() - 1 - half));
        rep.verdict = growth >= 1e-6 ? TransienceVerdict::DivergentLooking
                                     : TransienceVerdict::Inconclusive;
    }
    return rep;
}

}  // namespace driftwalk
