#ifndef FEDF_TASK_MODEL_HPP
#define FEDF_TASK_MODEL_HPP

#include "fedf/rational.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedf {

/// Dense zero-based identifier, tagged so task and processor ids don't mix.
template <typename Tag>
struct Id {
    std::uint32_t value = 0;

    constexpr Id() = default;
    constexpr explicit Id(std::uint32_t v) : value(v) {}

    friend constexpr auto operator<=>(Id, Id) = default;
};

using TaskId = Id<struct TaskTag>;
using ProcessorId = Id<struct ProcessorTag>;

/// Thrown for malformed task parameters, task sets and input files.
class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ReleaseModel { Periodic, Sporadic };

/**
 * A recurrent task T_i(e_i, p_i) with implicit deadline.
 *
 * The jitter is kept only so that task files round-trip; no scheduling
 * decision reads it.
 */
class Task {
public:
    /// Validates 0 < exec_cost <= period, jitter >= 0, first_release >= 0.
    static Task make(TaskId id, Rat exec_cost, Rat period,
                     ReleaseModel model = ReleaseModel::Periodic, Rat jitter = 0,
                     Rat first_release = 0);

    TaskId id() const { return id_; }
    const Rat& exec_cost() const { return exec_cost_; }
    const Rat& period() const { return period_; }
    const Rat& rel_deadline() const { return period_; }
    const Rat& jitter() const { return jitter_; }
    const Rat& first_release() const { return first_release_; }
    ReleaseModel release_model() const { return model_; }
    bool is_sporadic() const { return model_ == ReleaseModel::Sporadic; }

    /// Release of job k (k >= 1) when jobs arrive as early as allowed.
    Rat periodic_release(std::uint64_t k) const;

private:
    Task() = default;

    TaskId id_;
    Rat exec_cost_;
    Rat period_;
    Rat jitter_;
    Rat first_release_;
    ReleaseModel model_ = ReleaseModel::Periodic;
};

class TaskSet {
public:
    /// Validates n >= 1, m >= 1 and that task ids are exactly 0..n-1 in order.
    TaskSet(std::vector<Task> tasks, std::uint32_t processors);

    const std::vector<Task>& tasks() const { return tasks_; }
    const Task& operator[](TaskId id) const { return tasks_.at(id.value); }
    std::size_t size() const { return tasks_.size(); }
    std::uint32_t processors() const { return processors_; }

private:
    std::vector<Task> tasks_;
    std::uint32_t processors_;
};

/// One invocation T_{i,k} of a task.
struct Job {
    TaskId task;
    std::uint64_t index = 1;
    Rat release;
    Rat abs_deadline;
    Rat remaining;
};

Rat utilization(const Task& task);
Rat total_utilization(const TaskSet& ts);
bool is_light(const Task& task);
Rat job_tardiness(const Rat& completion, const Rat& abs_deadline);

/// Largest utilization in the set.
Rat max_utilization(const TaskSet& ts);

/**
 * Task-set text format:
 *
 *     # comment
 *     M=4
 *     0 2 5
 *     1 7/20 1 sporadic
 *     2 1.5 10 offset=3 jitter=1/2
 */
TaskSet parse_taskset(std::istream& in);
TaskSet load_taskset(const std::string& path);
void write_taskset(std::ostream& out, const TaskSet& ts);

}  // namespace fedf

#endif  // FEDF_TASK_MODEL_HPP
