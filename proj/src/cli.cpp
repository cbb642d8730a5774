#include "driftwalk/cli.hpp"

#include "driftwalk/bounds.hpp"
#include "driftwalk/environment.hpp"
#include "driftwalk/exact_solver.hpp"
#include "driftwalk/io.hpp"
#include "driftwalk/quadratic_form.hpp"
#include "driftwalk/rng.hpp"
#include "driftwalk/simulator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace driftwalk {

namespace {

using nlohmann::json;

std::vector<int64_t> parse_int_list(const std::string& text) {
    std::vector<int64_t> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stoll(part));
    return out;
}

std::vector<std::string> rational_strings(const std::vector<Rational>& xs) {
    std::vector<std::string> out;
    out.reserve(xs.size());
    for (const Rational& x : xs) out.push_back(rational_str(x));
    return out;
}

// All option values shared across subcommands.
struct Options {
    std::string out_path;
    int threads = 1;
    std::string format;

    int64_t N = 0;
    std::string p;
    std::string drifts;
    bool second_moment = false;
    bool coeffs = false;
    bool approx = false;

    std::string env_spec;
    int64_t steps = 0;
    int64_t reps = 1;
    uint64_t seed = 0;
    int64_t start = 0;
    std::optional<int64_t> target;
    int64_t cap = kDefaultCap;

    std::string lower;
    std::string upper;
    bool emit_paths = false;

    std::optional<int64_t> k;

    std::string formula;
    std::string lambda;
    int64_t m = 0;
    int64_t gap_n = 0;
    int64_t gap_l = 0;

    std::string p_min, p_max, lambda_min, lambda_max;
    int64_t resolution = 20;

    bool emit = false;
    std::string window;
    std::optional<int64_t> density_n;
    std::optional<int64_t> positions;
};

class OutputSink {
public:
    OutputSink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file: " + path);
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

void require_format(const Options& opt, std::initializer_list<const char*> allowed) {
    if (opt.format.empty()) return;
    for (const char* a : allowed)
        if (opt.format == a) return;
    throw std::invalid_argument("output format '" + opt.format +
                                "' not available for this subcommand");
}

FiniteEnvironment finite_from_flags(const Options& opt) {
    return FiniteEnvironment(opt.N, Probability::parse(opt.p), parse_int_list(opt.drifts));
}

// ---------------------------------------------------------------------- solve

void cmd_solve(const Options& opt, std::ostream& out) {
    require_format(opt, {"csv", "json"});
    const FiniteEnvironment env = finite_from_flags(opt);

    if (opt.coeffs) {
        require_format(opt, {"csv"});
        std::vector<Rational> drifts;
        for (int64_t l : env.drifts()) drifts.emplace_back(l);
        const PiecewiseQuadratic pq =
            closed_form_coeffs(Rational(env.N()), env.p(), drifts);
        out << "j,C,D\n";
        for (size_t j = 0; j < pq.C.size(); ++j)
            out << j + 1 << ',' << rational_str(pq.C[j]) << ',' << rational_str(pq.D[j])
                << '\n';
        return;
    }

    if (opt.approx) {
        const std::vector<double> v = solve_expected_hitting_f(env);
        out << "x,v\n";
        for (size_t x = 0; x < v.size(); ++x)
            out << x << ',' << format_double(v[x]) << '\n';
        return;
    }

    const HittingSolution sol =
        opt.second_moment ? solve_second_moment(env) : solve_expected_hitting(env);
    if (opt.format == "json") {
        json j;
        j["N"] = env.N();
        j["p"] = rational_str(env.p().value());
        j["drifts"] = env.drifts();
        j["v"] = rational_strings(sol.v);
        if (sol.w) j["w"] = rational_strings(*sol.w);
        out << j.dump() << '\n';
        return;
    }
    out << (sol.w ? "x,v,w\n" : "x,v\n");
    for (size_t x = 0; x < sol.v.size(); ++x) {
        out << x << ',' << rational_str(sol.v[x]);
        if (sol.w) out << ',' << rational_str((*sol.w)[x]);
        out << '\n';
    }
}

// ------------------------------------------------------------------- simulate

void emit_summary(std::ostream& out, json summary) {
    json wrapper;
    wrapper["summary"] = std::move(summary);
    out << wrapper.dump() << '\n';
}

void cmd_simulate(const Options& opt, std::ostream& out) {
    require_format(opt, {"json"});
    const EnvSpec spec = parse_env_spec(opt.env_spec);

    if (const auto* fin = std::get_if<FiniteEnvironment>(&spec)) {
        if (opt.target && *opt.target != fin->N())
            throw std::invalid_argument("segment walks always target N = " +
                                        std::to_string(fin->N()));
        const HittingTimeStats stats =
            sample_hitting_times(*fin, opt.reps, opt.seed, opt.cap, opt.threads);
        for (int64_t i = 0; i < stats.reps; ++i) {
            json line;
            line["rep"] = i;
            if (stats.samples[static_cast<size_t>(i)] >= 0)
                line["value"] = stats.samples[static_cast<size_t>(i)];
            else
                line["capped"] = true;
            out << line.dump() << '\n';
        }
        emit_summary(out, {{"mode", "hitting-time"},
                           {"mean", stats.mean},
                           {"stderr", stats.stderr_},
                           {"reps", stats.reps},
                           {"completed", stats.completed},
                           {"capped", stats.capped},
                           {"cap", stats.cap},
                           {"seed", stats.master_seed}});
        return;
    }

    const LineEnvironment& env = std::get<LineEnvironment>(spec);
    if (opt.target) {
        int64_t completed = 0, capped = 0;
        std::vector<std::optional<int64_t>> samples(static_cast<size_t>(opt.reps));
        for (int64_t i = 0; i < opt.reps; ++i) {
            samples[static_cast<size_t>(i)] =
                sample_hitting_time(env, opt.start, *opt.target,
                                    derive_stream_seed(opt.seed, static_cast<uint64_t>(i)),
                                    opt.cap);
            samples[static_cast<size_t>(i)] ? ++completed : ++capped;
        }
        double sum = 0.0, ss = 0.0;
        for (const auto& s : samples)
            if (s) sum += static_cast<double>(*s);
        const double mean = completed > 0 ? sum / static_cast<double>(completed) : 0.0;
        for (const auto& s : samples)
            if (s) ss += (static_cast<double>(*s) - mean) * (static_cast<double>(*s) - mean);
        const double stderr_ =
            completed > 1 ? std::sqrt(ss / static_cast<double>(completed - 1)) /
                                std::sqrt(static_cast<double>(completed))
                          : 0.0;
        for (int64_t i = 0; i < opt.reps; ++i) {
            json line;
            line["rep"] = i;
            if (samples[static_cast<size_t>(i)])
                line["value"] = *samples[static_cast<size_t>(i)];
            else
                line["capped"] = true;
            out << line.dump() << '\n';
        }
        emit_summary(out, {{"mode", "hitting-time"},
                           {"mean", mean},
                           {"stderr", stderr_},
                           {"reps", opt.reps},
                           {"completed", completed},
                           {"capped", capped},
                           {"cap", opt.cap},
                           {"seed", opt.seed}});
        return;
    }

    if (opt.steps < 1)
        throw std::invalid_argument("speed estimation needs --steps >= 1");
    const SpeedEstimate est = estimate_speed(env, opt.steps, opt.reps, opt.seed, opt.threads);
    for (int64_t i = 0; i < est.reps; ++i) {
        json line;
        line["rep"] = i;
        line["value"] = est.values[static_cast<size_t>(i)];
        out << line.dump() << '\n';
    }
    emit_summary(out, {{"mode", "speed"},
                       {"mean", est.mean},
                       {"stderr", est.stderr_},
                       {"steps", est.steps},
                       {"reps", est.reps},
                       {"seed", est.master_seed}});
}

// --------------------------------------------------------------------- couple

void cmd_couple(const Options& opt, std::ostream& out) {
    require_format(opt, {"json"});
    const EnvSpec lo_spec = parse_env_spec(opt.lower);
    const EnvSpec hi_spec = parse_env_spec(opt.upper);
    const auto* lo = std::get_if<LineEnvironment>(&lo_spec);
    const auto* hi = std::get_if<LineEnvironment>(&hi_spec);
    if (!lo || !hi)
        throw std::invalid_argument("coupling runs on line environments");
    if (opt.steps < 1) throw std::invalid_argument("coupling needs --steps >= 1");

    bool all_dominated = true;
    for (int64_t r = 0; r < opt.reps; ++r) {
        const CoupledRun run =
            coupled_run(*lo, *hi, opt.steps, derive_stream_seed(opt.seed, static_cast<uint64_t>(r)));
        all_dominated = all_dominated && run.dominated;
        json line;
        line["rep"] = r;
        line["dominated"] = run.dominated;
        if (!run.dominated) line["first_violation"] = run.first_violation;
        line["final_lower"] = run.lower_path.back();
        line["final_upper"] = run.upper_path.back();
        if (opt.emit_paths) {
            line["lower_path"] = run.lower_path;
            line["upper_path"] = run.upper_path;
        }
        out << line.dump() << '\n';
    }
    emit_summary(out, {{"mode", "couple"},
                       {"all_dominated", all_dominated},
                       {"steps", opt.steps},
                       {"reps", opt.reps},
                       {"seed", opt.seed}});
}

// ------------------------------------------------------------------- optimize

void cmd_optimize(const Options& opt, std::ostream& out) {
    require_format(opt, {"json"});
    const Probability p = Probability::parse(opt.p);

    if (!opt.drifts.empty()) {
        const RebalanceResult res = rebalance_descent(finite_from_flags(opt));
        for (size_t i = 0; i < res.moves.size(); ++i) {
            const RebalanceMove& mv = res.moves[i];
            json line;
            line["move"] = i;
            line["donor"] = mv.donor;
            line["receiver"] = mv.receiver;
            line["donor_len"] = mv.donor_len;
            line["receiver_len"] = mv.receiver_len;
            line["before"] = rational_str(mv.before);
            line["after"] = rational_str(mv.after);
            out << line.dump() << '\n';
        }
        json fin;
        fin["final"] = {{"drifts", res.env.drifts()},
                        {"interval_lengths", res.env.interval_lengths()},
                        {"expectation", rational_str(res.final_expectation)},
                        {"initial_expectation", rational_str(res.initial_expectation)},
                        {"moves", res.moves.size()}};
        out << fin.dump() << '\n';
        return;
    }

    if (!opt.k) throw std::invalid_argument("optimize needs --k (placement) or --drifts (descent)");
    const int64_t k = *opt.k;
    const DeterminantReport det = hessian_determinant(k, p);
    const NormReport norm = hessian_norm_report(k, p);
    json j;
    j["N"] = opt.N;
    j["p"] = rational_str(p.value());
    j["k"] = k;
    j["b"] = rational_strings(optimal_b(Rational(opt.N), p, k));
    j["minimum"] = rational_str(quadratic_minimum(Rational(opt.N), p, k));
    j["integer_feasible"] = integer_feasible(opt.N, p, k);
    j["hessian_det"] = rational_str(det.closed_form);
    j["norm_estimate"] = norm.estimate;
    j["norm_bound"] = rational_str(hessian_norm_bound(p));
    out << j.dump() << '\n';
}

// --------------------------------------------------------------------- bounds

void cmd_bounds(const Options& opt, std::ostream& out) {
    require_format(opt, {"json"});
    json j;
    j["formula"] = opt.formula;
    if (opt.formula == "speed-upper") {
        j["p"] = opt.p;
        j["lambda"] = opt.lambda;
        j["value"] =
            rational_str(speed_upper_bound(Probability::parse(opt.p), parse_rational(opt.lambda)));
    } else if (opt.formula == "upsilon-speed") {
        j["m"] = opt.m;
        j["lambda"] = opt.lambda;
        j["value"] = rational_str(upsilon_speed(opt.m, parse_rational(opt.lambda)));
    } else if (opt.formula == "tightness-gap") {
        const GapReport rep = tightness_gap(opt.gap_n, opt.m, opt.gap_l);
        j["n"] = rep.n;
        j["m"] = rep.m;
        j["l"] = rep.l;
        j["lambda"] = rational_str(rep.lambda);
        j["value"] = rational_str(rep.gap);
        j["corrected_rearrangement"] = rational_str(rep.corrected_rearrangement);
        j["printed_rearrangement"] = rational_str(rep.printed_rearrangement);
        j["lower_bound"] = rational_str(rep.lower_bound);
    } else if (opt.formula == "jensen") {
        const JensenBound jb =
            jensen_rwre_bound(Probability::parse(opt.p), parse_rational(opt.lambda));
        j["p"] = opt.p;
        j["lambda"] = opt.lambda;
        j["S"] = jb.S;
        j["value"] = jb.bound;
    } else if (opt.formula == "iid-speed") {
        j["p"] = opt.p;
        j["lambda"] = opt.lambda;
        j["value"] =
            rational_str(iid_rwre_speed(Probability::parse(opt.p), parse_rational(opt.lambda)));
    } else if (opt.formula == "compare") {
        const BoundReport rep =
            compare_bounds(Probability::parse(opt.p), parse_rational(opt.lambda));
        j["p"] = rational_str(rep.p);
        j["lambda"] = rational_str(rep.lambda);
        j["main"] = rational_str(rep.main_bound);
        j["jensen"] = rep.jensen_bound;
        j["iid_speed"] = rational_str(rep.iid_speed);
        j["winner"] = rep.winner;
        j["value"] = rational_str(rep.main_bound);
    } else {
        throw std::invalid_argument(
            "unknown formula '" + opt.formula +
            "' (expected speed-upper, upsilon-speed, tightness-gap, jensen, iid-speed, compare)");
    }
    out << j.dump() << '\n';
}

// ----------------------------------------------------------------------- scan

void cmd_scan(const Options& opt, std::ostream& out) {
    require_format(opt, {"csv"});
    const std::vector<GridCell> cells =
        bound_diff_grid(parse_rational(opt.p_min), parse_rational(opt.p_max),
                        parse_rational(opt.lambda_min), parse_rational(opt.lambda_max),
                        opt.resolution);
    out << "p,lambda,main,jensen,diff\n";
    for (const GridCell& c : cells)
        out << format_double(to_double(c.p)) << ',' << format_double(to_double(c.lambda)) << ','
            << format_double(c.main) << ',' << format_double(c.jensen) << ','
            << format_double(c.diff) << '\n';
}

// ------------------------------------------------------------------------ env

void cmd_env(const Options& opt, std::ostream& out) {
    const EnvSpec spec = parse_env_spec(opt.env_spec);
    int actions = (opt.emit ? 1 : 0) + (opt.window.empty() ? 0 : 1) + (opt.density_n ? 1 : 0) +
                  (opt.positions ? 1 : 0);
    if (actions > 1)
        throw std::invalid_argument("pick one of --emit, --window, --density, --positions");

    if (!opt.window.empty()) {
        require_format(opt, {"csv"});
        const auto colon = opt.window.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("--window wants LO:HI");
        int64_t lo = std::stoll(opt.window.substr(0, colon));
        int64_t hi = std::stoll(opt.window.substr(colon + 1));
        if (const auto* fin = std::get_if<FiniteEnvironment>(&spec)) {
            lo = std::max<int64_t>(lo, 0);
            hi = std::min<int64_t>(hi, fin->N() - 1);
            out << "site,prob\n";
            for (int64_t x = lo; x <= hi; ++x)
                out << x << ',' << rational_str(fin->right_prob(x)) << '\n';
        } else {
            out << env_window_csv(std::get<LineEnvironment>(spec), lo, hi);
        }
        return;
    }

    require_format(opt, {"json"});
    if (opt.density_n) {
        const auto* line = std::get_if<LineEnvironment>(&spec);
        if (!line) throw std::invalid_argument("--density applies to line environments");
        json j;
        j["n"] = *opt.density_n;
        j["value"] = rational_str(density_prefix(*line, *opt.density_n));
        j["declared"] = rational_str(line->lambda());
        out << j.dump() << '\n';
        return;
    }

    if (opt.positions) {
        const auto* line = std::get_if<LineEnvironment>(&spec);
        if (!line || line->kind() != EnvKind::Ceil)
            throw std::invalid_argument("--positions applies to ceil environments");
        json j;
        j["count"] = *opt.positions;
        j["positions"] = ceil_drift_positions(line->p(), line->lambda(), *opt.positions);
        out << j.dump() << '\n';
        return;
    }

    out << env_to_json(spec).dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and Monte Carlo analysis of nearest-neighbour random walks on the "
                 "integers in two-valued drift environments"};
    app.fallthrough();
    Options opt;

    app.add_option("--out", opt.out_path, "Write the main output to this file instead of stdout");
    app.add_option("--threads", opt.threads, "Worker threads for simulation replicas")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", opt.format, "Output format override (json or csv)");
    app.add_option("--seed", opt.seed, "Master seed for simulation subcommands");

    static const std::string kEnvHelp =
        "Environment: inline 'kind:key=val,...' (kinds: driftless, explicit, periodic, "
        "equally-spaced, ceil, upsilon, iid, finite; lists use ';'), inline JSON, or a JSON file "
        "path. Examples: equally-spaced:m=4,p=3/4  ceil:p=3/4,lambda=1/2  "
        "finite:N=8,p=3/4,drifts=3;5";

    CLI::App* solve = app.add_subcommand(
        "solve", "Exact expected hitting times on a reflected/absorbed segment");
    solve->add_option("--N", opt.N, "Segment endpoint (absorbing)")->required();
    solve->add_option("--p", opt.p, "Drift strength, rational a/b in (1/2, 1]")->required();
    solve->add_option("--drifts", opt.drifts, "Comma-separated drift sites in (0, N)");
    solve->add_flag("--second-moment", opt.second_moment, "Also solve second moments");
    solve->add_flag("--coeffs", opt.coeffs,
                    "Emit the piecewise-quadratic coefficients as CSV rows j,C,D");
    solve->add_flag("--approx", opt.approx, "Double-precision solve (large N)");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo walks, speeds, hitting times");
    simulate->add_option("--env", opt.env_spec, kEnvHelp)->required();
    simulate->add_option("--steps", opt.steps, "Steps per replica (speed mode)");
    simulate->add_option("--reps", opt.reps, "Number of replicas")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", opt.seed, "Master seed; replica i uses stream hash(seed, i)");
    simulate->add_option("--start", opt.start, "Start site (line environments)");
    simulate->add_option("--target", opt.target, "Hit this site instead of estimating speed");
    simulate->add_option("--cap", opt.cap, "Abandon a hitting-time sample after this many steps");

    CLI::App* couple = app.add_subcommand(
        "couple", "Run two walks on shared uniforms and check pathwise domination");
    couple->add_option("--lower", opt.lower, "Pointwise smaller environment. " + kEnvHelp)
        ->required();
    couple->add_option("--upper", opt.upper, "Pointwise larger environment")->required();
    couple->add_option("--steps", opt.steps, "Steps per run")->required();
    couple->add_option("--reps", opt.reps, "Independent coupled runs")->check(CLI::PositiveNumber);
    couple->add_option("--seed", opt.seed, "Master seed");
    couple->add_flag("--emit-paths", opt.emit_paths, "Include both full paths per run");

    CLI::App* optimize = app.add_subcommand(
        "optimize", "Optimal drift placement: minimizer report or balancing descent");
    optimize->add_option("--N", opt.N, "Segment endpoint")->required();
    optimize->add_option("--p", opt.p, "Drift strength, rational a/b")->required();
    optimize->add_option("--k", opt.k, "Drift count: report minimizer b, minimum, feasibility");
    optimize->add_option("--drifts", opt.drifts,
                         "Comma-separated start placement: run the p=1 balancing descent");

    CLI::App* bounds = app.add_subcommand("bounds", "Closed-form speed bounds, speeds, and gaps");
    bounds->add_option("--formula", opt.formula,
                       "speed-upper | upsilon-speed | tightness-gap | jensen | iid-speed | compare")
        ->required();
    bounds->add_option("--p", opt.p, "Drift strength, rational a/b");
    bounds->add_option("--lambda", opt.lambda, "Drift density, rational a/b");
    bounds->add_option("--m", opt.m, "Gap spacing scale");
    bounds->add_option("--n", opt.gap_n, "Density numerator for tightness-gap");
    bounds->add_option("--l", opt.gap_l, "Density offset for tightness-gap");

    CLI::App* scan = app.add_subcommand("scan", "CSV grid of main-vs-annealed bound difference");
    scan->add_option("--p-min", opt.p_min, "Rational")->required();
    scan->add_option("--p-max", opt.p_max, "Rational")->required();
    scan->add_option("--lambda-min", opt.lambda_min, "Rational")->required();
    scan->add_option("--lambda-max", opt.lambda_max, "Rational")->required();
    scan->add_option("--resolution", opt.resolution, "Grid cells per axis")
        ->check(CLI::PositiveNumber);

    CLI::App* env = app.add_subcommand("env", "Inspect, export, and round-trip environments");
    env->add_option("--spec", opt.env_spec, kEnvHelp)->required();
    env->add_flag("--emit", opt.emit, "Emit canonical JSON (default action)");
    env->add_option("--window", opt.window, "Emit CSV site,prob over LO:HI");
    env->add_option("--density", opt.density_n, "Emit exact prefix density over [0, n]");
    env->add_option("--positions", opt.positions,
                    "Emit the first COUNT drift positions (ceil environments)");

    app.require_subcommand(1);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("driftwalk");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        OutputSink sink(opt.out_path, out);
        if (*solve) cmd_solve(opt, sink.get());
        else if (*simulate) cmd_simulate(opt, sink.get());
        else if (*couple) cmd_couple(opt, sink.get());
        else if (*optimize) cmd_optimize(opt, sink.get());
        else if (*bounds) cmd_bounds(opt, sink.get());
        else if (*scan) cmd_scan(opt, sink.get());
        else if (*env) cmd_env(opt, sink.get());
        return 0;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::overflow_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace driftwalk
