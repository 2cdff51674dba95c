// Slot-by-slot reference scheduler. Deliberately shares no code with the
// event-driven engine: it works on integer tick counts and re-decides every
// slot.

#include "fedf/engine.hpp"

#include <deque>

namespace fedf {

namespace {

std::int64_t to_ticks(const Rat& value, const Rat& quantum, const char* what)
{
    const Rat q = value / quantum;
    if (!q.is_integer())
        throw ModelError(std::string(what) + " " + value.to_string() +
                         " is not a multiple of the quantum " + quantum.to_string());
    return q.num64();
}

struct TickJob {
    std::uint64_t index;
    std::int64_t deadline;
    std::int64_t remaining;
};

}  // namespace

OracleResult brute_force_oracle(const TaskSet& ts, const Rat& quantum, const Rat& horizon)
{
    if (ts.processors() != 1) throw ModelError("the slot oracle handles a single processor only");
    if (quantum.sign() <= 0) throw ModelError("quantum must be positive");
    const std::int64_t slots = to_ticks(horizon, quantum, "horizon");

    const std::size_t n = ts.size();
    std::vector<std::int64_t> exec(n), period(n), next_release(n);
    std::vector<std::uint64_t> next_index(n, 1);
    std::vector<std::deque<TickJob>> queue(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Task& t = ts.tasks()[i];
        exec[i] = to_ticks(t.exec_cost(), quantum, "execution cost");
        period[i] = to_ticks(t.period(), quantum, "period");
        next_release[i] = to_ticks(t.first_release(), quantum, "first release");
    }

    OracleResult out;
    SimStats& st = out.stats;
    st.horizon = horizon;
    st.per_task.assign(n, {});
    st.busy.assign(1, Rat(0));
    std::int64_t busy = 0;
    const Rat half = horizon / Rat(2);

    for (std::int64_t slot = 0; slot < slots; ++slot) {
        for (std::size_t i = 0; i < n; ++i) {
            if (next_release[i] != slot) continue;
            queue[i].push_back({next_index[i]++, slot + period[i], exec[i]});
            ++st.per_task[i].released;
            next_release[i] += period[i];
        }

        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (queue[i].empty()) continue;
            if (pick == n) {
                pick = i;
                continue;
            }
            const TickJob& a = queue[i].front();
            const TickJob& b = queue[pick].front();
            if (a.deadline < b.deadline) pick = i;  // ties keep the lower task id
        }
        if (pick == n) continue;

        ++busy;
        TickJob& job = queue[pick].front();
        if (--job.remaining > 0) continue;

        const Rat done = Rat(slot + 1) * quantum;
        const Rat late = Rat(std::max<std::int64_t>(0, slot + 1 - job.deadline)) * quantum;
        auto& ps = st.per_task[pick];
        ++ps.completed;
        if (late.sign() > 0) {
            ++ps.misses;
            ps.max_tardiness = max(ps.max_tardiness, late);
            st.max_tardiness = max(st.max_tardiness, late);
            if (done <= half)
                st.max_tardiness_first_half = max(st.max_tardiness_first_half, late);
            else
                st.max_tardiness_second_half = max(st.max_tardiness_second_half, late);
        }
        out.completions.emplace(JobKey{TaskId(static_cast<std::uint32_t>(pick)), job.index}, done);
        queue[pick].pop_front();
    }

    st.busy[0] = Rat(busy) * quantum;
    for (const auto& q : queue)
        for (const auto& job : q)
            if (job.deadline < slots) ++st.unfinished_overdue;
    return out;
}

}  // namespace fedf
