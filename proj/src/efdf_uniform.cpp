#include "fedf/efdf_uniform.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace fedf {

UniformPlatform::UniformPlatform(std::vector<Rat> speeds) : speeds_(std::move(speeds))
{
    if (speeds_.empty()) throw ModelError("platform needs at least one node");
    for (std::size_t j = 0; j < speeds_.size(); ++j) {
        if (speeds_[j].sign() <= 0) throw ModelError("node speeds must be positive");
        if (j > 0 && speeds_[j] > speeds_[j - 1])
            throw ModelError("node speeds must be listed in non-increasing order");
    }
}

namespace {

void sort_by_deadline(std::vector<ReadyTask>& v)
{
    std::stable_sort(v.begin(), v.end(), [](const ReadyTask& a, const ReadyTask& b) {
        if (a.abs_deadline != b.abs_deadline) return a.abs_deadline < b.abs_deadline;
        return a.task < b.task;
    });
}

}  // namespace

FeasibilitySplit partition_feasible(const DispatchState& state, const Rat& now,
                                    const UniformPlatform& platform)
{
    FeasibilitySplit split;
    for (const auto& entry : state) {
        if (entry.remaining.sign() <= 0)
            throw ModelError("task " + std::to_string(entry.task.value) +
                             " has no remaining work");
        if (entry.remaining / platform.fastest() <= entry.abs_deadline - now)
            split.can_meet.push_back(entry);
        else
            split.late.push_back(entry);
    }
    sort_by_deadline(split.can_meet);
    sort_by_deadline(split.late);
    return split;
}

std::vector<std::optional<TaskId>> dispatch(const DispatchState& state, const Rat& now,
                                            const UniformPlatform& platform, bool fill_from_late)
{
    const FeasibilitySplit split = partition_feasible(state, now, platform);
    const std::size_t m = platform.size();
    const std::size_t k = split.can_meet.size();
    const std::size_t top = std::min(k, m);

    std::vector<std::optional<TaskId>> nodes(m);
    std::vector<bool> used(k, false);

    // Affinity: keep a top-min(k, m) task on the node it last ran on.
    for (std::size_t i = 0; i < top; ++i) {
        const auto& last = split.can_meet[i].last_node;
        if (last && *last < top && !nodes[*last]) {
            nodes[*last] = split.can_meet[i].task;
            used[i] = true;
        }
    }

    // Earliest deadline among the rest of A for every still-empty node.
    std::size_t next = 0;
    for (std::size_t j = 0; j < top; ++j) {
        if (nodes[j]) continue;
        while (next < k && used[next]) ++next;
        if (next == k) break;
        nodes[j] = split.can_meet[next].task;
        used[next] = true;
    }

    if (fill_from_late && k < m) {
        std::size_t b = 0;
        for (std::size_t j = k; j < m && b < split.late.size(); ++j)
            if (!nodes[j]) nodes[j] = split.late[b++].task;
    }
    return nodes;
}

DispatchState parse_dispatch_state(std::istream& in)
{
    DispatchState state;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::string id, deadline, remaining, last;
        if (!(fields >> id)) continue;
        if (!(fields >> deadline >> remaining))
            throw ModelError("line " + std::to_string(line_no) +
                             ": expected 'task abs_deadline remaining [last_node]'");
        ReadyTask entry;
        try {
            entry.task = TaskId(static_cast<std::uint32_t>(std::stoul(id)));
            entry.abs_deadline = Rat::parse(deadline);
            entry.remaining = Rat::parse(remaining);
            if (fields >> last && last != "-") entry.last_node = std::stoul(last);
        } catch (const std::exception& e) {
            throw ModelError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (entry.remaining.sign() <= 0)
            throw ModelError("line " + std::to_string(line_no) + ": remaining work must be positive");
        state.push_back(std::move(entry));
    }
    return state;
}

}  // namespace fedf
