// Command-line front end: task-set generation, tests, distribution, job
// maps, simulation, EFDF dispatch and the batch experiments.

#include "fedf/efdf_uniform.hpp"
#include "fedf/engine.hpp"
#include "fedf/schedulability.hpp"
#include "fedf/workbench.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace fedf;

namespace {

std::vector<Rat> parse_rat_list(const std::string& text)
{
    std::vector<Rat> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(Rat::parse(item));
    if (out.empty()) throw ModelError("empty list '" + text + "'");
    return out;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

/// `task time time ...` per line; '#' comments.
std::map<TaskId, std::vector<Rat>> load_release_trace(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::map<TaskId, std::vector<Rat>> traces;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::string id, value;
        if (!(fields >> id)) continue;
        try {
            auto& times = traces[TaskId(static_cast<std::uint32_t>(std::stoul(id)))];
            while (fields >> value) times.push_back(Rat::parse(value));
        } catch (const std::exception& e) {
            throw ModelError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return traces;
}

void print_distribution(std::ostream& out, const TaskSet& ts, const Distribution& d)
{
    out << "proc  task  share       u        role\n";
    for (std::uint32_t j = 0; j < d.processors; ++j) {
        Rat load;
        for (const auto& s : d.shares) {
            if (s.processor.value != j) continue;
            load += s.value;
            out << 'P' << std::left << std::setw(4) << j << ' ' << std::setw(5) << s.task.value << ' '
                << std::setw(11) << s.value.to_string() << ' ' << std::setw(8)
                << utilization(ts[s.task]).to_string() << ' '
                << (d.is_migrating(s.task) ? "migrating" : "fixed") << '\n';
        }
        out << 'P' << j << " load " << load << '\n';
    }
    out << "migrating tasks: " << d.migrating_count() << '\n';
}

struct Options {
    std::string file, out, dist, releases, trace_out, csv, state, speeds, heuristic = "lef";
    std::string test = "feasible-edf", horizon, now = "0", slice, umax = "0.5";
    std::string cost_min = "1", cost_grain = "1", caps = "0.6,0.7,0.8,0.9,1.0", ms;
    std::uint64_t seed = 1, index = 0, count = 0, task = 0, jobs_count = 16;
    std::uint32_t m = 8;
    unsigned jobs = 0;
    bool no_late = false, static_order = false, m_given = false;
};

GenSpec gen_spec(const Options& o, std::uint64_t default_count)
{
    GenSpec spec;
    spec.m = o.m;
    spec.u_max_cap = Rat::parse(o.umax);
    spec.cost_min = Rat::parse(o.cost_min);
    spec.cost_grain = Rat::parse(o.cost_grain);
    spec.seed = o.seed;
    spec.count = o.count == 0 ? default_count : o.count;
    spec.validate();
    return spec;
}

void emit_rows(const Options& o, const std::vector<ExperimentRow>& rows)
{
    if (o.out.empty())
        std::cout << format_csv(rows);
    else
        emit_csv(rows, o.out);
}

int run_experiment(const std::string& kind, const Options& o)
{
    const unsigned jobs = o.jobs == 0 ? default_jobs() : o.jobs;
    if (kind == "heuristics") {
        const GenSpec spec = gen_spec(o, 10'000);
        const Rat horizon = o.horizon.empty() ? Rat(10'000) : Rat::parse(o.horizon);
        const auto res = experiment_heuristics(spec, standard_variants(), horizon, jobs);
        emit_rows(o, res.rows);
        std::cerr << "sets=" << res.sets.size() << " exclusions=" << res.exclusions << '\n';
        for (const auto& s : res.sets)
            for (const auto& e : s.errors) std::cerr << "excluded: " << e << '\n';
        return 0;
    }
    if (kind == "nonlight") {
        const GenSpec base = gen_spec(o, 100'000);
        std::vector<std::uint32_t> ms;
        if (o.ms.empty()) {
            ms = o.m_given ? std::vector<std::uint32_t>{o.m} : std::vector<std::uint32_t>{2, 4, 8, 16};
        } else {
            std::stringstream ss(o.ms);
            std::string item;
            while (std::getline(ss, item, ',')) ms.push_back(static_cast<std::uint32_t>(std::stoul(item)));
        }
        const auto caps = parse_rat_list(o.caps);
        const std::vector<Heuristic> hs = {Heuristic::luf(), Heuristic::huf(), Heuristic::lef(),
                                           Heuristic::random(0)};
        emit_rows(o, nonlight_rows(experiment_nonlight(base, ms, caps, hs, jobs)));
        return 0;
    }
    if (kind == "convergence") {
        const GenSpec spec = gen_spec(o, 3'000);
        const Rat horizon = o.horizon.empty() ? Rat(100'000) : Rat::parse(o.horizon);
        const auto res = experiment_convergence(spec, horizon, jobs);
        emit_rows(o, res.rows);
        std::cerr << "sets=" << res.sets.size() << " exclusions=" << res.exclusions
                  << " converged_fraction=" << res.converged_fraction() << '\n';
        return 0;
    }
    throw CLI::ValidationError("experiment", "unknown experiment '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Feasible EDF multiprocessor scheduling lab"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("gen", "generate one random task set");
    gen->add_option("--m", o.m, "processors");
    gen->add_option("--umax", o.umax, "utilization cap per task");
    gen->add_option("--seed", o.seed);
    gen->add_option("--index", o.index, "set index within the population");
    gen->add_option("--cost-min", o.cost_min, "lower end of the execution-cost range");
    gen->add_option("--cost-grain", o.cost_grain, "execution costs are multiples of this");
    gen->add_option("--out", o.out, "write here instead of stdout");

    auto* check = app.add_subcommand("check", "utilization-based schedulability test");
    check->add_option("--file", o.file)->required();
    check->add_option("--test", o.test)->check(CLI::IsMember({"edf", "rm", "feasible-edf"}));

    auto* assign = app.add_subcommand("assign", "distribute tasks over processors");
    assign->add_option("--file", o.file)->required();
    assign->add_option("--heuristic", o.heuristic)
        ->check(CLI::IsMember({"seq", "sequential", "huf", "luf", "lef", "random"}));
    assign->add_option("--seed", o.seed);
    assign->add_option("--out", o.out, "write the distribution file here");

    auto* jobmap = app.add_subcommand("jobmap", "job-to-processor rule of a migrating task");
    jobmap->add_option("--file", o.dist, "distribution file")->required();
    jobmap->add_option("--task", o.task)->required();
    jobmap->add_option("--count", o.jobs_count);

    auto* sim = app.add_subcommand("simulate", "run the execution phase");
    sim->add_option("--taskset", o.file)->required();
    sim->add_option("--distribution", o.dist)->required();
    sim->add_option("--horizon", o.horizon);
    sim->add_option("--slice", o.slice, "lo,hi target sub-job cost range for migrating tasks");
    sim->add_option("--releases", o.releases, "release trace file");
    sim->add_option("--trace-out", o.trace_out);
    sim->add_option("--csv", o.csv, "per-task statistics as CSV");
    sim->add_flag("--static-migrating-order", o.static_order,
                  "order migrating tasks by id instead of EDF (non-canonical)");

    auto* efdf = app.add_subcommand("efdf-step", "one EFDF dispatch decision on a uniform platform");
    efdf->add_option("--state", o.state)->required();
    efdf->add_option("--speeds", o.speeds)->required();
    efdf->add_option("--now", o.now);
    efdf->add_flag("--no-late-fill", o.no_late, "leave nodes idle instead of running late tasks");

    auto* exp = app.add_subcommand("experiment", "batch experiments");
    std::string kind;
    exp->add_option("kind", kind)->required()->check(CLI::IsMember({"heuristics", "nonlight", "convergence"}));
    exp->add_option("--m", o.m);
    exp->add_option("--ms", o.ms, "processor counts for nonlight, e.g. 2,4,8,16");
    exp->add_option("--umax", o.umax);
    exp->add_option("--caps", o.caps, "utilization caps for nonlight");
    exp->add_option("--count", o.count);
    exp->add_option("--seed", o.seed);
    exp->add_option("--horizon", o.horizon);
    exp->add_option("--cost-min", o.cost_min);
    exp->add_option("--cost-grain", o.cost_grain);
    exp->add_option("--out", o.out);
    exp->add_option("--jobs", o.jobs, "worker threads (default: FEDF_JOBS or all cores)");

    CLI11_PARSE(app, argc, argv);
    o.m_given = exp->count("--m") > 0;

    try {
        if (*gen) {
            const GenSpec spec = gen_spec(o, 1);
            const TaskSet ts = generate_taskset(spec, o.index);
            if (o.out.empty()) {
                write_taskset(std::cout, ts);
            } else {
                auto out = open_out(o.out);
                write_taskset(out, ts);
            }
            return 0;
        }
        if (*check) {
            const TaskSet ts = load_taskset(o.file);
            if (o.test == "feasible-edf") {
                const bool ok = feasible_edf_admissible(ts);
                std::cout << "verdict=" << (ok ? "admissible" : "not-admissible") << '\n'
                          << "U=" << total_utilization(ts) << '\n'
                          << "u_max=" << max_utilization(ts) << '\n'
                          << "bound=" << ts.processors() << '\n';
                return ok ? 0 : 2;
            }
            const TestVerdict v = o.test == "edf" ? edf_uniprocessor_test(ts) : rm_sufficient_test(ts);
            std::cout << "verdict=" << (v.schedulable ? "schedulable" : "not-schedulable") << '\n'
                      << "U=" << v.total_utilization << '\n';
            if (const auto* r = std::get_if<Rat>(&v.bound))
                std::cout << "bound=" << *r << '\n';
            else
                std::cout << "bound=" << std::setprecision(15) << v.bound_value() << '\n';
            return v.schedulable ? 0 : 2;
        }
        if (*assign) {
            const TaskSet ts = load_taskset(o.file);
            const Distribution d = assign_tasks(ts, Heuristic::parse(o.heuristic, o.seed));
            print_distribution(std::cout, ts, d);
            if (!o.out.empty()) {
                auto out = open_out(o.out);
                write_distribution(out, d);
            }
            return 0;
        }
        if (*jobmap) {
            const Distribution d = load_distribution(o.dist);
            const JobMap m = build_job_map(d, TaskId(static_cast<std::uint32_t>(o.task)));
            std::cout << "task=" << o.task << " first=P" << m.first_proc.value << " f=" << m.f_first
                      << " second=P" << m.second_proc.value << " f=" << m.f_second
                      << " cycle=" << m.cycle_length << '\n';
            for (std::uint64_t k = 1; k <= o.jobs_count; ++k)
                std::cout << k << " P" << job_processor(m, k).value << '\n';
            return 0;
        }
        if (*sim) {
            const TaskSet ts = load_taskset(o.file);
            const Distribution d = load_distribution(o.dist, ts.size(), ts.processors());
            SimConfig cfg;
            cfg.horizon = o.horizon.empty() ? Rat(1000) : Rat::parse(o.horizon);
            if (!o.slice.empty()) {
                const auto range = parse_rat_list(o.slice);
                if (range.size() != 2) throw ModelError("--slice expects lo,hi");
                cfg.slice = SliceRange{range[0], range[1]};
            }
            if (!o.releases.empty()) cfg.release_trace = load_release_trace(o.releases);
            if (o.static_order) cfg.migrating_order = MigratingOrder::StaticById;
            cfg.record_trace = !o.trace_out.empty();
            const SimResult r = simulate(ts, d, cfg);
            write_stats(std::cout, r.stats);
            if (!o.trace_out.empty()) {
                auto out = open_out(o.trace_out);
                write_trace(out, r.trace);
            }
            if (!o.csv.empty()) {
                auto out = open_out(o.csv);
                out << "task,released,completed,misses,max_tardiness\n";
                for (std::size_t i = 0; i < r.stats.per_task.size(); ++i) {
                    const auto& t = r.stats.per_task[i];
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "%.6f", t.max_tardiness.to_double());
                    out << i << ',' << t.released << ',' << t.completed << ',' << t.misses << ',' << buf
                        << '\n';
                }
            }
            return 0;
        }
        if (*efdf) {
            std::ifstream in(o.state);
            if (!in) throw std::runtime_error("cannot open '" + o.state + "'");
            const DispatchState st = parse_dispatch_state(in);
            const UniformPlatform platform(parse_rat_list(o.speeds));
            const auto nodes = dispatch(st, Rat::parse(o.now), platform, !o.no_late);
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                std::cout << "node" << j << ' ';
                if (nodes[j])
                    std::cout << nodes[j]->value << '\n';
                else
                    std::cout << "idle\n";
            }
            return 0;
        }
        if (*exp) return run_experiment(kind, o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
