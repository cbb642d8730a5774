#pragma once

#include "driftwalk/environment.hpp"
#include "driftwalk/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace driftwalk {

/// Abandon-threshold for hitting-time samples.  Recurrent environments have
/// heavy-tailed hitting times, so a sample that exceeds the cap is reported
/// as capped rather than awaited forever.
inline constexpr int64_t kDefaultCap = 1'000'000'000;

struct WalkSummary {
    int64_t final_pos = 0;
    int64_t min_pos = 0;
    int64_t max_pos = 0;
    int64_t steps_taken = 0;          // < requested only if absorbed early
    std::vector<int64_t> path;        // filled only when recording; size steps_taken+1
};

/// Fixed number of steps through a line environment; reproducible per seed.
WalkSummary run_walk(const LineEnvironment& env, int64_t start, int64_t steps, uint64_t seed,
                     bool record_path = false);

/// Same on a segment; the walk freezes once absorbed at N.
WalkSummary run_walk(const FiniteEnvironment& env, int64_t start, int64_t steps, uint64_t seed,
                     bool record_path = false);

/// First time the walk from 0 occupies N, or nullopt if `cap` steps pass
/// first (a value, not an error).
std::optional<int64_t> sample_hitting_time(const FiniteEnvironment& env, uint64_t seed,
                                           int64_t cap = kDefaultCap);

/// Line-environment variant with an explicit start and target.
std::optional<int64_t> sample_hitting_time(const LineEnvironment& env, int64_t start,
                                           int64_t target, uint64_t seed,
                                           int64_t cap = kDefaultCap);

struct HittingTimeStats {
    int64_t reps = 0;
    int64_t completed = 0;
    int64_t capped = 0;       // capped + completed == reps; capped samples are
                              // excluded from mean/stderr, never silently dropped
    double mean = 0.0;
    double stderr_ = 0.0;     // sample sd of completed samples / sqrt(completed)
    uint64_t master_seed = 0;
    int64_t cap = kDefaultCap;
    std::vector<int64_t> samples;  // per rep; -1 marks a capped sample
};
HittingTimeStats sample_hitting_times(const FiniteEnvironment& env, int64_t reps,
                                      uint64_t master_seed, int64_t cap = kDefaultCap,
                                      int threads = 1);

struct SpeedEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;  // sample sd / sqrt(reps)
    int64_t steps = 0;
    int64_t reps = 0;
    uint64_t master_seed = 0;
    std::vector<double> values;  // X_steps/steps per rep, indexed by rep
};

/// Mean of X_steps/steps over `reps` walks from 0.  Rep i runs on its own
/// stream derive_stream_seed(master_seed, i), so the result is identical for
/// every thread count.
SpeedEstimate estimate_speed(const LineEnvironment& env, int64_t steps, int64_t reps,
                             uint64_t master_seed, int threads = 1);

/// Speed across independently re-sampled all-iid environments: rep i draws a
/// fresh environment (streams 2i / 2i+1 for environment and walk) windowed to
/// `steps` so the walk can never leave it.
SpeedEstimate estimate_iid_speed(const Probability& p, const Rational& lambda, int64_t steps,
                                 int64_t reps, uint64_t master_seed, int threads = 1);

/// Two walks fed the identical uniform sequence, stepping right when the
/// uniform falls below their own environment's probability.  Pointwise
/// ordering lower(x) <= upper(x) is verified exactly (rational compare) at
/// every site either walk visits; a violation throws with the site.  The
/// domination flag records whether the upper walk stayed >= the lower at
/// every single step, which the ordering guarantees.
struct CoupledRun {
    std::vector<int64_t> lower_path;  // size steps+1
    std::vector<int64_t> upper_path;
    bool dominated = false;
    int64_t first_violation = -1;  // step index, or -1
};
CoupledRun coupled_run(const LineEnvironment& lower, const LineEnvironment& upper,
                       int64_t steps, uint64_t seed);

/// Partial sums of sum_n prod_{j<=n} (1-w(j))/w(j) for j = 1..depth.
/// A finite sum means the walk escapes to the right; the verdict is a
/// diagnostic reading of finitely many terms, never a proof:
///   finite-looking    last product < 1e-12 (terms decaying geometrically)
///   divergent-looking mean growth of the second half >= 1e-6 per term
///   inconclusive      anything else
enum class TransienceVerdict { FiniteLooking, DivergentLooking, Inconclusive };
struct TransienceReport {
    std::vector<double> partial_sums;  // index n-1 holds the sum through n
    double last_term = 0.0;
    TransienceVerdict verdict = TransienceVerdict::Inconclusive;
};
TransienceReport transience_stat(const LineEnvironment& env, int64_t depth);

}  // namespace driftwalk
