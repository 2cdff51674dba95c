#ifndef FEDF_WORKBENCH_HPP
#define FEDF_WORKBENCH_HPP

#include "fedf/assignment.hpp"
#include "fedf/engine.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fedf {

/**
 * Random task-set population.
 *
 * Tasks are appended while U < M. Each gets an integer period uniform in
 * [period_lo, period_hi] and an execution cost drawn uniformly from the
 * multiples of `cost_grain` inside [min(cost_min, u_max p), u_max p]
 * (u_max p itself if that range holds no multiple). The task that reaches
 * U >= M has its cost cut so that U == M exactly.
 */
struct GenSpec {
    std::uint32_t m = 8;
    Rat u_max_cap = Rat(1, 2);
    std::int64_t period_lo = 1;
    std::int64_t period_hi = 100;
    Rat cost_min = 1;
    Rat cost_grain = 1;
    std::uint64_t seed = 1;
    std::uint64_t count = 1000;

    void validate() const;
};

/// Deterministic in (spec, index); different indices are independent streams.
TaskSet generate_taskset(const GenSpec& spec, std::uint64_t index);

struct SetProfile {
    Rat e_max;
    Rat e_avg;
    Rat u_max;
    Rat u_avg;
};

SetProfile profile(const TaskSet& ts);

enum class Classification { EMax, EAvg, UMax, UAvg };

std::string to_string(Classification c);
/// Integer buckets for execution costs, 0.05-wide buckets for utilizations.
std::int64_t bucket_of(Classification c, const SetProfile& p);
std::string group_key(Classification c, std::int64_t bucket);

struct ExperimentRow {
    std::string group_key;
    std::string heuristic;
    std::uint64_t n = 0;
    double mean = 0.0;
    double ci99 = 0.0;
};

/// Mean and 99% normal-approximation half-width; exact sums, so the
/// result does not depend on the order of `values`.
ExperimentRow summarize(std::string group, std::string heuristic, const std::vector<Rat>& values);

/// A distribution heuristic, optionally with job slicing of migrating tasks.
struct Variant {
    std::string label;
    Heuristic heuristic;
    std::optional<SliceRange> slice;
};

/// Random, HUF, LUF, LEF and LEF with sub-job costs in [1, 2).
std::vector<Variant> standard_variants();

/// Worker count from FEDF_JOBS, else the hardware concurrency (at least 1).
unsigned default_jobs();

/**
 * Runs fn(0..count-1) on `jobs` threads and returns the results in index
 * order. The first exception thrown by any call is rethrown.
 */
template <typename T>
std::vector<T> run_indexed(std::uint64_t count, unsigned jobs,
                           const std::function<T(std::uint64_t)>& fn);

struct HeuristicSetOutcome {
    SetProfile profile;
    /// Observed system max tardiness per variant; nullopt when excluded.
    std::vector<std::optional<Rat>> max_tardiness;
    std::vector<Rat> migrating_max_tardiness;
    std::vector<std::string> errors;
};

struct HeuristicsResult {
    std::vector<Variant> variants;
    std::vector<HeuristicSetOutcome> sets;
    std::vector<ExperimentRow> rows;
    std::uint64_t exclusions = 0;
};

/// Assign + simulate every generated set under every variant, then
/// aggregate per classification bucket (plus an "all" group).
HeuristicsResult experiment_heuristics(const GenSpec& spec, const std::vector<Variant>& variants,
                                       const Rat& horizon, unsigned jobs);

struct NonLightCell {
    std::uint32_t m = 0;
    Rat u_max_cap;
    std::string heuristic;
    std::uint64_t n = 0;
    std::uint64_t successes = 0;

    double ratio() const { return n == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(n); }
};

/// Success ratio of assign_non_light for every (M, cap, heuristic).
std::vector<NonLightCell> experiment_nonlight(const GenSpec& base,
                                              const std::vector<std::uint32_t>& ms,
                                              const std::vector<Rat>& caps,
                                              const std::vector<Heuristic>& heuristics,
                                              unsigned jobs);
std::vector<ExperimentRow> nonlight_rows(const std::vector<NonLightCell>& cells);

struct ConvergenceSet {
    SetProfile profile;
    Rat max_tardiness;
    Rat migrating_max_tardiness;
    bool converged = false;
    std::size_t migrating_tasks = 0;
    std::optional<std::string> error;
};

struct ConvergenceResult {
    std::vector<ConvergenceSet> sets;
    std::vector<ExperimentRow> rows;
    std::uint64_t exclusions = 0;

    double converged_fraction() const;
};

/// LEF + simulation to `horizon`; rows grouped by e_avg and u_avg.
ConvergenceResult experiment_convergence(const GenSpec& spec, const Rat& horizon, unsigned jobs);

/// Header `group_key,heuristic,n,mean,ci99`; reals with 6 fractional digits.
void emit_csv(const std::vector<ExperimentRow>& rows, const std::string& path);
std::string format_csv(const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> parse_csv(const std::string& text);

}  // namespace fedf

#include "fedf/detail/run_indexed.hpp"

#endif  // FEDF_WORKBENCH_HPP
