#ifndef FEDF_ENGINE_HPP
#define FEDF_ENGINE_HPP

#include "fedf/assignment.hpp"
#include "fedf/job_distribution.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

namespace fedf {

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Half-open range [lo, hi) of target sub-job execution costs.
struct SliceRange {
    Rat lo;
    Rat hi;
};

/// How the (at most two) migrating tasks of a processor are ordered among
/// themselves. EDF is the canonical rule; StaticById is kept for comparison.
enum class MigratingOrder { Edf, StaticById };

struct SimConfig {
    Rat horizon = 1000;
    /// Slice every job of a migrating task into sub-jobs with costs in the range.
    std::optional<SliceRange> slice;
    /// Explicit release times per task. A task with a trace releases exactly
    /// those (logical) jobs; other tasks release periodically from their offset.
    std::map<TaskId, std::vector<Rat>> release_trace;
    MigratingOrder migrating_order = MigratingOrder::Edf;
    /// Keep every execution segment and completion time.
    bool record_trace = false;
    /// Reject distributions that fail validate_distribution. Only overload
    /// experiments turn this off.
    bool check_distribution = true;
    /// Replaces the job map of migrating tasks, e.g. to reproduce naive
    /// alternating patterns.
    std::function<ProcessorId(TaskId, std::uint64_t)> job_router;
};

struct Segment {
    ProcessorId processor;
    TaskId task;
    std::uint64_t job = 0;
    Rat start;
    Rat end;
};

struct JobKey {
    TaskId task;
    std::uint64_t job = 0;
    friend auto operator<=>(const JobKey&, const JobKey&) = default;
};

struct SimTrace {
    std::vector<Segment> segments;
    std::map<JobKey, Rat> completions;
};

struct TaskStats {
    Rat max_tardiness;
    std::uint64_t misses = 0;
    std::uint64_t released = 0;
    std::uint64_t completed = 0;
};

struct SimStats {
    Rat horizon;
    std::vector<TaskStats> per_task;
    Rat max_tardiness;
    /// Maximum over jobs completing at or before horizon / 2.
    Rat max_tardiness_first_half;
    /// Maximum over jobs completing after horizon / 2.
    Rat max_tardiness_second_half;
    Rat migrating_max_tardiness;
    std::uint64_t migrations = 0;
    std::vector<Rat> busy;
    /// Released jobs still unfinished at the horizon although their deadline passed.
    std::uint64_t unfinished_overdue = 0;
};

struct SimResult {
    SimTrace trace;
    SimStats stats;
};

/**
 * Event-driven execution phase of Feasible EDF.
 *
 * Each processor runs its ready migrating jobs strictly above its ready
 * fixed jobs, EDF within each class (ties: lower task id, then lower job
 * index). Jobs of migrating tasks are routed by their job map. Job k + 1
 * of a task cannot start before job k completes, but its release is never
 * postponed.
 */
SimResult simulate(const TaskSet& ts, const Distribution& d, const SimConfig& cfg);

/// Slices each job into q = exec_cost / target_cost sub-jobs (q must be an integer).
Task period_transform(const Task& task, const Rat& target_cost);

/// Largest exec_cost / q (integer q >= 1) in [lo, hi); exec_cost itself if
/// it is already below lo. When no quotient lands in the range, the largest
/// quotient below hi is used.
Rat choose_slice(const Task& task, const SliceRange& range);

struct OracleResult {
    SimStats stats;
    std::map<JobKey, Rat> completions;
};

/// Slot-by-slot EDF reference for one processor; all task parameters and the
/// horizon must be multiples of `quantum`.
OracleResult brute_force_oracle(const TaskSet& ts, const Rat& quantum, const Rat& horizon);

/// No job completing in the second half of the run was later than the worst
/// job of the first half.
bool max_tardiness_converged(const SimStats& stats);

void write_trace(std::ostream& out, const SimTrace& trace);
void write_stats(std::ostream& out, const SimStats& stats);

}  // namespace fedf

#endif  // FEDF_ENGINE_HPP
