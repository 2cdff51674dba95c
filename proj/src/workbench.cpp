#include "fedf/workbench.hpp"

#include "fedf/schedulability.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace fedf {

void GenSpec::validate() const
{
    if (m == 0) throw ModelError("processor count must be positive");
    if (u_max_cap.sign() <= 0 || u_max_cap > Rat(1)) throw ModelError("u_max must lie in (0, 1]");
    if (period_lo < 1 || period_hi < period_lo) throw ModelError("bad period range");
    if (cost_min.sign() <= 0) throw ModelError("cost_min must be positive");
    if (cost_grain.sign() <= 0) throw ModelError("cost_grain must be positive");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

/// Seed of the Random heuristic for one set, independent of the generator stream.
std::uint64_t random_heuristic_seed(std::uint64_t seed, std::uint64_t index)
{
    return splitmix64(splitmix64(seed) ^ index);
}

}  // namespace

TaskSet generate_taskset(const GenSpec& spec, std::uint64_t index)
{
    spec.validate();
    auto rng = stream_for(spec.seed, index);
    std::uniform_int_distribution<std::int64_t> period_dist(spec.period_lo, spec.period_hi);

    const Rat target(spec.m);
    Rat total;
    std::vector<Task> tasks;
    while (total < target) {
        const Rat period(period_dist(rng));
        const Rat hi = spec.u_max_cap * period;
        const Rat lo = min(spec.cost_min, hi);
        const std::int64_t k_lo = (lo / spec.cost_grain).ceil_int();
        const std::int64_t k_hi = (hi / spec.cost_grain).floor_int();
        Rat cost = hi;
        if (k_lo <= k_hi)
            cost = spec.cost_grain *
                   Rat(std::uniform_int_distribution<std::int64_t>(k_lo, k_hi)(rng));
        Rat u = cost / period;
        if (total + u >= target) {
            u = target - total;
            cost = u * period;
        }
        tasks.push_back(Task::make(TaskId(static_cast<std::uint32_t>(tasks.size())), cost, period));
        total += u;
    }
    return TaskSet(std::move(tasks), spec.m);
}

SetProfile profile(const TaskSet& ts)
{
    SetProfile p;
    Rat e_sum, u_sum;
    for (const auto& t : ts.tasks()) {
        const Rat u = utilization(t);
        p.e_max = max(p.e_max, t.exec_cost());
        p.u_max = max(p.u_max, u);
        e_sum += t.exec_cost();
        u_sum += u;
    }
    const Rat n(static_cast<std::int64_t>(ts.size()));
    p.e_avg = e_sum / n;
    p.u_avg = u_sum / n;
    return p;
}

std::string to_string(Classification c)
{
    switch (c) {
    case Classification::EMax: return "e_max";
    case Classification::EAvg: return "e_avg";
    case Classification::UMax: return "u_max";
    case Classification::UAvg: return "u_avg";
    }
    return "?";
}

std::int64_t bucket_of(Classification c, const SetProfile& p)
{
    switch (c) {
    case Classification::EMax: return p.e_max.floor_int();
    case Classification::EAvg: return p.e_avg.floor_int();
    case Classification::UMax: return (p.u_max * Rat(20)).floor_int();
    case Classification::UAvg: return (p.u_avg * Rat(20)).floor_int();
    }
    return 0;
}

std::string group_key(Classification c, std::int64_t bucket)
{
    if (c == Classification::EMax || c == Classification::EAvg)
        return to_string(c) + "=" + std::to_string(bucket);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", static_cast<double>(bucket) * 0.05);
    return to_string(c) + "=" + buf;
}

ExperimentRow summarize(std::string group, std::string heuristic, const std::vector<Rat>& values)
{
    ExperimentRow row;
    row.group_key = std::move(group);
    row.heuristic = std::move(heuristic);
    row.n = values.size();
    if (values.empty()) return row;
    Rat sum;
    for (const auto& v : values) sum += v;
    const Rat n(static_cast<std::int64_t>(values.size()));
    const Rat mean = sum / n;
    row.mean = mean.to_double();
    if (values.size() > 1) {
        Rat ss;
        for (const auto& v : values) {
            const Rat d = v - mean;
            ss += d * d;
        }
        const double var = (ss / (n - Rat(1))).to_double();
        constexpr double z99 = 2.5758293035489004;
        row.ci99 = z99 * std::sqrt(var / static_cast<double>(values.size()));
    }
    return row;
}

std::vector<Variant> standard_variants()
{
    return {
        {"random", Heuristic::random(0), std::nullopt},
        {"huf", Heuristic::huf(), std::nullopt},
        {"luf", Heuristic::luf(), std::nullopt},
        {"lef", Heuristic::lef(), std::nullopt},
        {"lef-slice", Heuristic::lef(), SliceRange{Rat(1), Rat(2)}},
    };
}

unsigned default_jobs()
{
    if (const char* env = std::getenv("FEDF_JOBS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace {

constexpr Classification kClassifications[] = {Classification::EMax, Classification::EAvg,
                                               Classification::UMax, Classification::UAvg};

/// Rows for "all" and every bucket of every classification, buckets in
/// ascending order, labels in the given order within a bucket.
std::vector<ExperimentRow> aggregate(
    const std::vector<SetProfile>& profiles, const std::vector<std::string>& labels,
    const std::function<std::optional<Rat>(std::size_t set, std::size_t label)>& value,
    const std::vector<Classification>& classes)
{
    std::vector<ExperimentRow> rows;
    for (std::size_t l = 0; l < labels.size(); ++l) {
        std::vector<Rat> all;
        for (std::size_t s = 0; s < profiles.size(); ++s)
            if (auto v = value(s, l)) all.push_back(std::move(*v));
        rows.push_back(summarize("all", labels[l], all));
    }
    for (const auto c : classes) {
        std::map<std::int64_t, std::vector<std::size_t>> buckets;
        for (std::size_t s = 0; s < profiles.size(); ++s) buckets[bucket_of(c, profiles[s])].push_back(s);
        for (const auto& [bucket, members] : buckets) {
            for (std::size_t l = 0; l < labels.size(); ++l) {
                std::vector<Rat> vals;
                for (const auto s : members)
                    if (auto v = value(s, l)) vals.push_back(std::move(*v));
                if (!vals.empty()) rows.push_back(summarize(group_key(c, bucket), labels[l], vals));
            }
        }
    }
    return rows;
}

}  // namespace

HeuristicsResult experiment_heuristics(const GenSpec& spec, const std::vector<Variant>& variants,
                                       const Rat& horizon, unsigned jobs)
{
    spec.validate();
    if (spec.u_max_cap > Rat(1, 2))
        throw ModelError("the heuristics experiment needs light tasks (u_max <= 1/2)");

    HeuristicsResult result;
    result.variants = variants;
    const std::function<HeuristicSetOutcome(std::uint64_t)> one = [&](std::uint64_t index) {
        const TaskSet ts = generate_taskset(spec, index);
        HeuristicSetOutcome out;
        out.profile = profile(ts);
        out.max_tardiness.resize(variants.size());
        out.migrating_max_tardiness.resize(variants.size());
        for (std::size_t v = 0; v < variants.size(); ++v) {
            Heuristic h = variants[v].heuristic;
            if (h.kind == HeuristicKind::Random) h.seed = random_heuristic_seed(spec.seed, index);
            try {
                const Distribution d = assign_tasks(ts, h);
                SimConfig cfg;
                cfg.horizon = horizon;
                cfg.slice = variants[v].slice;
                const SimResult r = simulate(ts, d, cfg);
                out.max_tardiness[v] = r.stats.max_tardiness;
                out.migrating_max_tardiness[v] = r.stats.migrating_max_tardiness;
            } catch (const std::exception& e) {
                out.errors.push_back(variants[v].label + ": " + e.what());
            }
        }
        return out;
    };
    result.sets = run_indexed(spec.count, jobs, one);

    std::vector<SetProfile> profiles;
    std::vector<std::string> labels;
    for (const auto& v : variants) labels.push_back(v.label);
    for (const auto& s : result.sets) {
        profiles.push_back(s.profile);
        for (const auto& t : s.max_tardiness)
            if (!t) ++result.exclusions;
    }
    result.rows = aggregate(
        profiles, labels,
        [&](std::size_t s, std::size_t l) { return result.sets[s].max_tardiness[l]; },
        {std::begin(kClassifications), std::end(kClassifications)});
    return result;
}

std::vector<NonLightCell> experiment_nonlight(const GenSpec& base,
                                              const std::vector<std::uint32_t>& ms,
                                              const std::vector<Rat>& caps,
                                              const std::vector<Heuristic>& heuristics,
                                              unsigned jobs)
{
    std::vector<NonLightCell> cells;
    for (const auto m : ms) {
        for (const auto& cap : caps) {
            GenSpec spec = base;
            spec.m = m;
            spec.u_max_cap = cap;
            spec.validate();
            const std::function<std::vector<bool>(std::uint64_t)> one = [&](std::uint64_t index) {
                const TaskSet ts = generate_taskset(spec, index);
                std::vector<bool> ok;
                for (auto h : heuristics) {
                    if (h.kind == HeuristicKind::Random)
                        h.seed = random_heuristic_seed(spec.seed, index);
                    ok.push_back(static_cast<bool>(assign_non_light(ts, h)));
                }
                return ok;
            };
            const auto outcomes = run_indexed(spec.count, jobs, one);
            for (std::size_t h = 0; h < heuristics.size(); ++h) {
                NonLightCell cell;
                cell.m = m;
                cell.u_max_cap = cap;
                cell.heuristic = heuristics[h].name();
                cell.n = outcomes.size();
                for (const auto& o : outcomes) cell.successes += o[h] ? 1 : 0;
                cells.push_back(std::move(cell));
            }
        }
    }
    return cells;
}

std::vector<ExperimentRow> nonlight_rows(const std::vector<NonLightCell>& cells)
{
    std::vector<ExperimentRow> rows;
    for (const auto& c : cells) {
        ExperimentRow r;
        char cap[32];
        std::snprintf(cap, sizeof cap, "%.2f", c.u_max_cap.to_double());
        r.group_key = "m=" + std::to_string(c.m) + ";u_max=" + cap;
        r.heuristic = c.heuristic;
        r.n = c.n;
        r.mean = c.ratio();
        if (c.n > 0)
            r.ci99 = 2.5758293035489004 *
                     std::sqrt(r.mean * (1.0 - r.mean) / static_cast<double>(c.n));
        rows.push_back(std::move(r));
    }
    return rows;
}

double ConvergenceResult::converged_fraction() const
{
    std::uint64_t ok = 0, n = 0;
    for (const auto& s : sets) {
        if (s.error) continue;
        ++n;
        ok += s.converged ? 1 : 0;
    }
    return n == 0 ? 0.0 : static_cast<double>(ok) / static_cast<double>(n);
}

ConvergenceResult experiment_convergence(const GenSpec& spec, const Rat& horizon, unsigned jobs)
{
    spec.validate();
    if (spec.u_max_cap > Rat(1, 2))
        throw ModelError("the convergence experiment needs light tasks (u_max <= 1/2)");

    const std::function<ConvergenceSet(std::uint64_t)> one = [&](std::uint64_t index) {
        const TaskSet ts = generate_taskset(spec, index);
        ConvergenceSet out;
        out.profile = profile(ts);
        try {
            const Distribution d = assign_tasks(ts, Heuristic::lef());
            out.migrating_tasks = d.migrating_count();
            SimConfig cfg;
            cfg.horizon = horizon;
            const SimResult r = simulate(ts, d, cfg);
            out.max_tardiness = r.stats.max_tardiness;
            out.migrating_max_tardiness = r.stats.migrating_max_tardiness;
            out.converged = max_tardiness_converged(r.stats);
        } catch (const std::exception& e) {
            out.error = e.what();
        }
        return out;
    };

    ConvergenceResult result;
    result.sets = run_indexed(spec.count, jobs, one);
    std::vector<SetProfile> profiles;
    for (const auto& s : result.sets) {
        profiles.push_back(s.profile);
        if (s.error) ++result.exclusions;
    }
    result.rows = aggregate(
        profiles, {"lef"},
        [&](std::size_t s, std::size_t) -> std::optional<Rat> {
            if (result.sets[s].error) return std::nullopt;
            return result.sets[s].max_tardiness;
        },
        {Classification::EAvg, Classification::UAvg});
    return result;
}

std::string format_csv(const std::vector<ExperimentRow>& rows)
{
    std::string out = "group_key,heuristic,n,mean,ci99\n";
    char buf[64];
    for (const auto& r : rows) {
        out += r.group_key;
        out += ',';
        out += r.heuristic;
        out += ',';
        out += std::to_string(r.n);
        std::snprintf(buf, sizeof buf, ",%.6f", r.mean);
        out += buf;
        std::snprintf(buf, sizeof buf, ",%.6f\n", r.ci99);
        out += buf;
    }
    return out;
}

void emit_csv(const std::vector<ExperimentRow>& rows, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << format_csv(rows);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<ExperimentRow> parse_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::vector<ExperimentRow> rows;
    if (!std::getline(in, line) || line != "group_key,heuristic,n,mean,ci99")
        throw ModelError("CSV header mismatch");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::string cell;
        std::istringstream fields(line);
        while (std::getline(fields, cell, ',')) cols.push_back(cell);
        if (cols.size() != 5)
            throw ModelError("CSV line " + std::to_string(line_no) + ": expected 5 columns");
        ExperimentRow r;
        r.group_key = cols[0];
        r.heuristic = cols[1];
        try {
            r.n = std::stoull(cols[2]);
            r.mean = std::stod(cols[3]);
            r.ci99 = std::stod(cols[4]);
        } catch (const std::exception&) {
            throw ModelError("CSV line " + std::to_string(line_no) + ": bad number");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace fedf
