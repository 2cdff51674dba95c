#ifndef FEDF_ASSIGNMENT_HPP
#define FEDF_ASSIGNMENT_HPP

#include "fedf/task_model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fedf {

/// Fraction s_ij of processor `processor`'s capacity reserved for `task`.
struct Share {
    TaskId task;
    ProcessorId processor;
    Rat value;
};

/**
 * Result of the distribution phase.
 *
 * `shares` is the source of truth; the per-processor and per-task views are
 * derived from it by `Distribution::from_shares` and kept alongside for
 * cheap lookups.
 */
struct Distribution {
    std::uint32_t processors = 0;
    std::vector<Share> shares;
    std::vector<std::vector<TaskId>> fixed;            // per processor
    std::vector<std::vector<TaskId>> migrating;        // per processor
    std::vector<std::vector<ProcessorId>> task_procs;  // per task, ascending

    /// Rebuilds the derived views. Tasks with shares on two or more
    /// processors are listed as migrating on each of them.
    static Distribution from_shares(std::size_t tasks, std::uint32_t processors,
                                    std::vector<Share> shares);

    bool is_migrating(TaskId task) const { return task_procs.at(task.value).size() >= 2; }
    std::size_t migrating_count() const;
    /// s_ij, or nullopt if the task has no share on the processor.
    std::optional<Rat> share(TaskId task, ProcessorId proc) const;
    /// Sum of the task's shares (its utilization under P1).
    Rat task_total(TaskId task) const;
};

enum class HeuristicKind { Sequential, HUF, LUF, LEF, Random };

struct Heuristic {
    HeuristicKind kind = HeuristicKind::Sequential;
    std::uint64_t seed = 0;

    static Heuristic sequential() { return {HeuristicKind::Sequential, 0}; }
    static Heuristic huf() { return {HeuristicKind::HUF, 0}; }
    static Heuristic luf() { return {HeuristicKind::LUF, 0}; }
    static Heuristic lef() { return {HeuristicKind::LEF, 0}; }
    static Heuristic random(std::uint64_t seed) { return {HeuristicKind::Random, seed}; }

    /// "seq", "huf", "luf", "lef", "random".
    static Heuristic parse(const std::string& name, std::uint64_t seed = 0);
    std::string name() const;

    friend bool operator==(const Heuristic&, const Heuristic&) = default;
};

class AssignmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Assign-Tasks for light task sets with U <= M. Throws AssignmentError on
/// non-admissible input.
Distribution assign_tasks(const TaskSet& ts, const Heuristic& h);

/// s_ij / u_i, with u_i recovered as the task's share total.
Rat fraction_on_processor(const Distribution& d, TaskId task, ProcessorId proc);

enum class ViolationKind {
    UnknownReference,  // task or processor out of range
    NonPositiveShare,
    ShareExceedsLimit,  // share > 1 or share > utilization
    TooManyProcessors,  // P1: more than two processors
    ShareSumMismatch,   // P1: shares do not sum to the utilization
    TooManyMigrating,   // P2
    Overloaded,         // P3
    NonConsecutive,
    InconsistentViews,
};

struct Violation {
    ViolationKind kind;
    std::string message;
};

std::string to_string(ViolationKind kind);

/// Exact check of P1, P2, P3 and the consecutive-processor property.
std::vector<Violation> validate_distribution(const TaskSet& ts, const Distribution& d);

struct AssignOutcome {
    std::optional<Distribution> distribution;
    std::string failure;

    explicit operator bool() const { return distribution.has_value(); }
};

/**
 * Assign-Tasks without the light-task restriction. Additionally keeps the
 * combined utilization of the two migrating tasks of every processor <= 1.
 * Failure is an ordinary outcome, not an exception.
 */
AssignOutcome assign_non_light(const TaskSet& ts, const Heuristic& h);

/// Line format: `task proc share_num/share_den fixed|migrating`.
void write_distribution(std::ostream& out, const Distribution& d);
/// Tasks and processors are sized from the largest ids seen unless given.
Distribution parse_distribution(std::istream& in, std::size_t tasks = 0,
                                std::uint32_t processors = 0);
Distribution load_distribution(const std::string& path, std::size_t tasks = 0,
                               std::uint32_t processors = 0);

}  // namespace fedf

#endif  // FEDF_ASSIGNMENT_HPP
