#ifndef FEDF_JOB_DISTRIBUTION_HPP
#define FEDF_JOB_DISTRIBUTION_HPP

#include "fedf/assignment.hpp"

#include <cstdint>
#include <span>

namespace fedf {

/// A Pfair task weight in (0, 1].
class Weight {
public:
    explicit Weight(Rat value);
    const Rat& value() const { return value_; }

private:
    Rat value_;
};

/// Subtask i may run in slots [release_slot, deadline_slot).
struct Window {
    std::uint64_t subtask_index = 1;
    std::uint64_t release_slot = 0;
    std::uint64_t deadline_slot = 1;
};

/// r(T_i) = floor((i - 1) / w).
std::uint64_t subtask_release(const Weight& w, std::uint64_t i);
/// d(T_i) = ceil(i / w).
std::uint64_t subtask_deadline(const Weight& w, std::uint64_t i);
Window subtask_window(const Weight& w, std::uint64_t i);

/// w * t minus the number of scheduled slots in [0, t).
Rat lag(const Weight& w, std::span<const bool> sched, std::uint64_t t);
/// -1 < lag < 1 at every t in [0, horizon].
bool is_pfair(const Weight& w, std::span<const bool> sched, std::uint64_t horizon);
bool is_complementary(const Weight& a, const Weight& b);

/**
 * Static job-to-processor rule for one migrating task.
 *
 * With f_first = x / y in lowest terms, job k (slot s = k - 1) goes to
 * `first_proc` exactly when s is the first slot of a window of the weight
 * f_first task; every other slot is the last slot of a window of the
 * complementary weight f_second task. The rule depends on the job number
 * only and repeats every y jobs.
 */
struct JobMap {
    TaskId task;
    ProcessorId first_proc;
    ProcessorId second_proc;
    Rat f_first;
    Rat f_second;
    Rat cycle_length;  // y, may exceed 64 bits
};

/// Throws AssignmentError if the task is not migrating in `d`.
JobMap build_job_map(const Distribution& d, TaskId task);

ProcessorId job_processor(const JobMap& map, std::uint64_t k);

/// ceil(l * f): the most jobs out of any l consecutive ones that go to the
/// processor with fraction f.
std::uint64_t lemma1_bound(std::uint64_t l, const Rat& f);

}  // namespace fedf

#endif  // FEDF_JOB_DISTRIBUTION_HPP
