#include "fedf/engine.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <ostream>
#include <queue>

namespace fedf {

Task period_transform(const Task& task, const Rat& target_cost)
{
    if (target_cost.sign() <= 0 || target_cost > task.exec_cost())
        throw ModelError("slice target must lie in (0, exec_cost]");
    const Rat q = task.exec_cost() / target_cost;
    if (!q.is_integer())
        throw ModelError("exec_cost " + task.exec_cost().to_string() +
                         " is not an integer multiple of " + target_cost.to_string());
    return Task::make(task.id(), task.exec_cost() / q, task.period() / q, task.release_model(),
                      task.jitter(), task.first_release());
}

Rat choose_slice(const Task& task, const SliceRange& range)
{
    if (range.lo.sign() <= 0) throw ModelError("slice range lower bound must be positive");
    const Rat& e = task.exec_cost();
    if (e < range.lo) return e;
    // Smallest q with e / q < hi gives the largest quotient below hi.
    const Rat q = (e / range.hi).floor() + Rat(1);
    return e / q;
}

namespace {

struct PendingJob {
    std::uint64_t index;
    Rat release;
    Rat deadline;
    Rat remaining;
    ProcessorId proc;
};

struct TaskRuntime {
    Rat exec;
    Rat period;
    std::int64_t slices = 1;
    bool migrating = false;
    ProcessorId home;
    std::optional<JobMap> map;
    const std::vector<Rat>* trace = nullptr;
    std::uint64_t next_index = 1;
    std::deque<PendingJob> pending;
    std::optional<ProcessorId> last_proc;
};

struct ProcRuntime {
    std::vector<std::uint32_t> ready;  // tasks whose head job is routed here
    std::optional<std::uint32_t> running;
    Rat run_start;
    Rat finish;
    bool dirty = false;
};

struct ReleaseEvent {
    Rat time;
    std::uint32_t task;
    bool operator>(const ReleaseEvent& o) const
    {
        if (time != o.time) return time > o.time;
        return task > o.task;
    }
};

class Simulator {
public:
    Simulator(const TaskSet& ts, const Distribution& d, const SimConfig& cfg)
        : ts_(ts), cfg_(cfg), tasks_(ts.size()), procs_(ts.processors())
    {
        if (cfg.horizon.sign() <= 0) throw SimulationError("horizon must be positive");
        if (cfg.check_distribution) check(d);
        if (d.task_procs.size() != ts.size())
            throw SimulationError("distribution does not cover every task");

        for (std::size_t i = 0; i < ts.size(); ++i) {
            const Task& task = ts.tasks()[i];
            TaskRuntime& rt = tasks_[i];
            const auto& procs = d.task_procs[i];
            if (procs.empty())
                throw SimulationError("task " + std::to_string(i) + " has no processor");
            for (const auto p : procs)
                if (p.value >= ts.processors())
                    throw SimulationError("task " + std::to_string(i) +
                                          " is assigned to a missing processor");
            rt.exec = task.exec_cost();
            rt.period = task.period();
            rt.home = procs.front();
            rt.migrating = procs.size() >= 2;
            if (rt.migrating) {
                if (!cfg.job_router) rt.map = build_job_map(d, TaskId(static_cast<std::uint32_t>(i)));
                if (cfg.slice) {
                    const Rat target = choose_slice(task, *cfg.slice);
                    const Rat q = task.exec_cost() / target;
                    rt.slices = q.num64();
                    rt.exec = target;
                    rt.period = task.period() / q;
                }
            }
        }

        for (const auto& [id, times] : cfg.release_trace) {
            if (id.value >= ts.size())
                throw SimulationError("release trace for unknown task " + std::to_string(id.value));
            const Rat& p = ts[id].period();
            for (std::size_t k = 0; k < times.size(); ++k) {
                if (times[k].sign() < 0)
                    throw SimulationError("task " + std::to_string(id.value) +
                                          ": negative release time");
                if (k > 0 && times[k] - times[k - 1] < p)
                    throw SimulationError("task " + std::to_string(id.value) + ": releases " +
                                          times[k - 1].to_string() + " and " +
                                          times[k].to_string() + " are closer than the period");
            }
            tasks_[id.value].trace = &times;
        }

        stats_.horizon = cfg.horizon;
        stats_.per_task.assign(ts.size(), {});
        stats_.busy.assign(ts.processors(), Rat(0));
        half_ = cfg.horizon / Rat(2);
    }

    SimResult run()
    {
        for (std::uint32_t i = 0; i < tasks_.size(); ++i) schedule_next_release(i);

        Rat now;
        for (;;) {
            std::optional<Rat> next;
            if (!releases_.empty()) next = releases_.top().time;
            for (const auto& p : procs_)
                if (p.running && (!next || p.finish < *next)) next = p.finish;
            if (!next || *next > cfg_.horizon) break;
            now = *next;

            for (std::uint32_t j = 0; j < procs_.size(); ++j)
                if (procs_[j].running && procs_[j].finish == now) complete(j, now);
            while (!releases_.empty() && releases_.top().time == now) {
                const std::uint32_t task = releases_.top().task;
                releases_.pop();
                release(task, now);
            }
            for (std::uint32_t j = 0; j < procs_.size(); ++j)
                if (procs_[j].dirty) dispatch(j, now);
        }

        for (std::uint32_t j = 0; j < procs_.size(); ++j) {
            ProcRuntime& p = procs_[j];
            if (p.running) close_segment(j, *p.running, cfg_.horizon);
        }
        for (const auto& rt : tasks_)
            for (const auto& job : rt.pending)
                if (job.deadline < cfg_.horizon) ++stats_.unfinished_overdue;

        SimResult out;
        out.trace = std::move(trace_);
        out.stats = std::move(stats_);
        return out;
    }

private:
    void check(const Distribution& d) const
    {
        const auto violations = validate_distribution(ts_, d);
        if (!violations.empty())
            throw SimulationError("invalid distribution: " + violations.front().message);
        for (std::uint32_t j = 0; j < d.processors; ++j) {
            Rat sum;
            for (const auto t : d.migrating[j]) sum += utilization(ts_[t]);
            if (sum > Rat(1))
                throw SimulationError("P" + std::to_string(j) +
                                      ": migrating tasks have combined utilization above 1");
        }
    }

    std::optional<Rat> release_time(const TaskRuntime& rt, const Task& task, std::uint64_t k) const
    {
        const auto sub = static_cast<std::uint64_t>(rt.slices);
        const std::uint64_t logical = (k - 1) / sub;
        const auto offset = static_cast<std::int64_t>((k - 1) % sub);
        Rat base;
        if (rt.trace) {
            if (logical >= rt.trace->size()) return std::nullopt;
            base = (*rt.trace)[logical];
        } else {
            base = task.first_release() +
                   Rat(static_cast<std::int64_t>(logical)) * task.period();
        }
        if (offset != 0) base += Rat(offset) * rt.period;
        return base;
    }

    void schedule_next_release(std::uint32_t i)
    {
        TaskRuntime& rt = tasks_[i];
        auto when = release_time(rt, ts_.tasks()[i], rt.next_index);
        if (when && *when < cfg_.horizon) releases_.push({std::move(*when), i});
    }

    ProcessorId route(std::uint32_t i, std::uint64_t k) const
    {
        const TaskRuntime& rt = tasks_[i];
        if (!rt.migrating) return rt.home;
        if (cfg_.job_router) return cfg_.job_router(TaskId(i), k);
        return job_processor(*rt.map, k);
    }

    void release(std::uint32_t i, const Rat& now)
    {
        TaskRuntime& rt = tasks_[i];
        const std::uint64_t k = rt.next_index++;
        const ProcessorId proc = route(i, k);
        if (proc.value >= procs_.size())
            throw SimulationError("job routed to a missing processor");
        if (rt.migrating) {
            if (rt.last_proc && *rt.last_proc != proc) ++stats_.migrations;
            rt.last_proc = proc;
        }
        rt.pending.push_back({k, now, now + rt.period, rt.exec, proc});
        ++stats_.per_task[i].released;
        if (rt.pending.size() == 1) make_ready(i);
        schedule_next_release(i);
    }

    void make_ready(std::uint32_t i)
    {
        const ProcessorId proc = tasks_[i].pending.front().proc;
        procs_[proc.value].ready.push_back(i);
        procs_[proc.value].dirty = true;
    }

    void complete(std::uint32_t j, const Rat& now)
    {
        ProcRuntime& p = procs_[j];
        const std::uint32_t i = *p.running;
        close_segment(j, i, now);
        p.running.reset();
        p.dirty = true;
        p.ready.erase(std::find(p.ready.begin(), p.ready.end(), i));

        TaskRuntime& rt = tasks_[i];
        const PendingJob& job = rt.pending.front();
        const Rat tardiness = job_tardiness(now, job.deadline);
        TaskStats& ts = stats_.per_task[i];
        ++ts.completed;
        if (tardiness.sign() > 0) {
            ++ts.misses;
            if (tardiness > ts.max_tardiness) ts.max_tardiness = tardiness;
            if (tardiness > stats_.max_tardiness) stats_.max_tardiness = tardiness;
            if (rt.migrating && tardiness > stats_.migrating_max_tardiness)
                stats_.migrating_max_tardiness = tardiness;
            if (now <= half_) {
                if (tardiness > stats_.max_tardiness_first_half)
                    stats_.max_tardiness_first_half = tardiness;
            } else if (tardiness > stats_.max_tardiness_second_half) {
                stats_.max_tardiness_second_half = tardiness;
            }
        }
        if (cfg_.record_trace) trace_.completions.emplace(JobKey{TaskId(i), job.index}, now);
        rt.pending.pop_front();
        if (!rt.pending.empty()) make_ready(i);
    }

    /// Accounts the running stretch of task i on processor j up to `end`.
    void close_segment(std::uint32_t j, std::uint32_t i, const Rat& end)
    {
        ProcRuntime& p = procs_[j];
        if (end == p.run_start) return;
        stats_.busy[j] += end - p.run_start;
        if (cfg_.record_trace)
            trace_.segments.push_back({ProcessorId(j), TaskId(i), tasks_[i].pending.front().index,
                                       p.run_start, end});
    }

    bool higher_priority(std::uint32_t a, std::uint32_t b) const
    {
        const TaskRuntime& ra = tasks_[a];
        const TaskRuntime& rb = tasks_[b];
        if (ra.migrating != rb.migrating) return ra.migrating;
        const PendingJob& ja = ra.pending.front();
        const PendingJob& jb = rb.pending.front();
        const bool by_deadline =
            !(ra.migrating && cfg_.migrating_order == MigratingOrder::StaticById);
        if (by_deadline && ja.deadline != jb.deadline) return ja.deadline < jb.deadline;
        if (a != b) return a < b;
        return ja.index < jb.index;
    }

    void dispatch(std::uint32_t j, const Rat& now)
    {
        ProcRuntime& p = procs_[j];
        p.dirty = false;
        std::optional<std::uint32_t> best;
        for (const auto i : p.ready)
            if (!best || higher_priority(i, *best)) best = i;
        if (best == p.running) return;

        if (p.running) {
            const std::uint32_t prev = *p.running;
            close_segment(j, prev, now);
            tasks_[prev].pending.front().remaining -= now - p.run_start;
        }
        p.running = best;
        if (best) {
            p.run_start = now;
            p.finish = now + tasks_[*best].pending.front().remaining;
        }
    }

    const TaskSet& ts_;
    const SimConfig& cfg_;
    std::vector<TaskRuntime> tasks_;
    std::vector<ProcRuntime> procs_;
    std::priority_queue<ReleaseEvent, std::vector<ReleaseEvent>, std::greater<>> releases_;
    SimStats stats_;
    SimTrace trace_;
    Rat half_;
};

}  // namespace

SimResult simulate(const TaskSet& ts, const Distribution& d, const SimConfig& cfg)
{
    return Simulator(ts, d, cfg).run();
}

bool max_tardiness_converged(const SimStats& stats)
{
    return stats.max_tardiness_second_half <= stats.max_tardiness_first_half;
}

void write_trace(std::ostream& out, const SimTrace& trace)
{
    for (const auto& s : trace.segments)
        out << s.processor.value << ' ' << s.task.value << ' ' << s.job << ' ' << s.start << ' '
            << s.end << '\n';
}

void write_stats(std::ostream& out, const SimStats& stats)
{
    std::uint64_t misses = 0;
    for (const auto& t : stats.per_task) misses += t.misses;
    out << "horizon=" << stats.horizon << '\n'
        << "max_tardiness=" << stats.max_tardiness << '\n'
        << "max_tardiness_first_half=" << stats.max_tardiness_first_half << '\n'
        << "max_tardiness_second_half=" << stats.max_tardiness_second_half << '\n'
        << "converged=" << (max_tardiness_converged(stats) ? "true" : "false") << '\n'
        << "migrating_max_tardiness=" << stats.migrating_max_tardiness << '\n'
        << "misses=" << misses << '\n'
        << "migrations=" << stats.migrations << '\n'
        << "unfinished_overdue=" << stats.unfinished_overdue << '\n';
    for (std::size_t j = 0; j < stats.busy.size(); ++j)
        out << "busy.P" << j << '=' << stats.busy[j] << '\n';
    for (std::size_t i = 0; i < stats.per_task.size(); ++i) {
        const auto& t = stats.per_task[i];
        out << "task." << i << ".max_tardiness=" << t.max_tardiness << '\n'
            << "task." << i << ".misses=" << t.misses << '\n'
            << "task." << i << ".completed=" << t.completed << '\n';
    }
}

}  // namespace fedf
