#include "fedf/job_distribution.hpp"

#include <limits>
#include <stdexcept>

namespace fedf {

namespace {

Rat as_rat(std::uint64_t v)
{
    if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        throw std::overflow_error("slot index exceeds 63 bits");
    return Rat(static_cast<std::int64_t>(v));
}

std::uint64_t as_slot(const Rat& r)
{
    const auto v = r.num64();
    if (v < 0) throw std::overflow_error("negative slot");
    return static_cast<std::uint64_t>(v);
}

}  // namespace

Weight::Weight(Rat value) : value_(std::move(value))
{
    if (value_.sign() <= 0 || value_ > Rat(1))
        throw std::invalid_argument("weight must lie in (0, 1], got " + value_.to_string());
}

std::uint64_t subtask_release(const Weight& w, std::uint64_t i)
{
    if (i == 0) throw std::invalid_argument("subtask indices start at 1");
    return as_slot((as_rat(i - 1) / w.value()).floor());
}

std::uint64_t subtask_deadline(const Weight& w, std::uint64_t i)
{
    if (i == 0) throw std::invalid_argument("subtask indices start at 1");
    return as_slot((as_rat(i) / w.value()).ceil());
}

Window subtask_window(const Weight& w, std::uint64_t i)
{
    return Window{i, subtask_release(w, i), subtask_deadline(w, i)};
}

Rat lag(const Weight& w, std::span<const bool> sched, std::uint64_t t)
{
    if (t > sched.size())
        throw std::out_of_range("lag: t = " + std::to_string(t) + " beyond schedule of length " +
                                std::to_string(sched.size()));
    std::int64_t allocated = 0;
    for (std::uint64_t u = 0; u < t; ++u) allocated += sched[u] ? 1 : 0;
    return w.value() * as_rat(t) - Rat(allocated);
}

bool is_pfair(const Weight& w, std::span<const bool> sched, std::uint64_t horizon)
{
    if (horizon > sched.size()) return false;
    std::int64_t allocated = 0;
    for (std::uint64_t t = 0;; ++t) {
        const Rat l = w.value() * as_rat(t) - Rat(allocated);
        if (l <= Rat(-1) || l >= Rat(1)) return false;
        if (t == horizon) return true;
        allocated += sched[t] ? 1 : 0;
    }
}

bool is_complementary(const Weight& a, const Weight& b)
{
    return a.value() + b.value() == Rat(1);
}

JobMap build_job_map(const Distribution& d, TaskId task)
{
    if (task.value >= d.task_procs.size())
        throw AssignmentError("task " + std::to_string(task.value) + " is not in the distribution");
    const auto& procs = d.task_procs[task.value];
    if (procs.size() != 2)
        throw AssignmentError("task " + std::to_string(task.value) +
                              " is not a migrating task with exactly two processors");
    JobMap map;
    map.task = task;
    map.first_proc = procs[0];
    map.second_proc = procs[1];
    map.f_first = fraction_on_processor(d, task, procs[0]);
    map.f_second = fraction_on_processor(d, task, procs[1]);
    if (map.f_first + map.f_second != Rat(1))
        throw AssignmentError("task " + std::to_string(task.value) +
                              ": processor fractions do not sum to 1");
    map.cycle_length = Rat::from_strings(map.f_first.den_string(), "1");
    return map;
}

ProcessorId job_processor(const JobMap& map, std::uint64_t k)
{
    if (k == 0) throw std::invalid_argument("job indices start at 1");
    // Slot s opens a window of the f_first task iff the count of subtask
    // releases in [0, s] exceeds the count in [0, s - 1]; that count is
    // ceil((s + 1) * f).
    const Rat s = as_rat(k - 1);
    const Rat before = (s * map.f_first).ceil();
    const Rat through = ((s + Rat(1)) * map.f_first).ceil();
    return through > before ? map.first_proc : map.second_proc;
}

std::uint64_t lemma1_bound(std::uint64_t l, const Rat& f)
{
    return as_slot((as_rat(l) * f).ceil());
}

}  // namespace fedf
