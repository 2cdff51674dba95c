#ifndef FEDF_EFDF_UNIFORM_HPP
#define FEDF_EFDF_UNIFORM_HPP

#include "fedf/task_model.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace fedf {

/// Processing nodes with speeds s_1 >= s_2 >= ... >= s_m > 0.
class UniformPlatform {
public:
    explicit UniformPlatform(std::vector<Rat> speeds);

    const std::vector<Rat>& speeds() const { return speeds_; }
    std::size_t size() const { return speeds_.size(); }
    const Rat& fastest() const { return speeds_.front(); }

private:
    std::vector<Rat> speeds_;
};

struct ReadyTask {
    TaskId task;
    Rat abs_deadline;
    Rat remaining;
    std::optional<std::size_t> last_node;  // zero-based
};

using DispatchState = std::vector<ReadyTask>;

struct FeasibilitySplit {
    std::vector<ReadyTask> can_meet;  // set A, sorted by deadline then id
    std::vector<ReadyTask> late;      // set B, sorted likewise
};

/// A task can still meet its deadline if remaining / s_1 <= deadline - now.
FeasibilitySplit partition_feasible(const DispatchState& state, const Rat& now,
                                    const UniformPlatform& platform);

/// One dispatch decision; entry j is the task placed on node j, if any.
/// `fill_from_late` enables the optional last step that hands idle nodes to
/// tasks that will miss their deadlines anyway.
std::vector<std::optional<TaskId>> dispatch(const DispatchState& state, const Rat& now,
                                            const UniformPlatform& platform,
                                            bool fill_from_late = true);

/// Lines of `task abs_deadline remaining [last_node]`, '#' comments.
DispatchState parse_dispatch_state(std::istream& in);

}  // namespace fedf

#endif  // FEDF_EFDF_UNIFORM_HPP
