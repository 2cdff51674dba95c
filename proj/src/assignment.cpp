#include "fedf/assignment.hpp"

#include "fedf/schedulability.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace fedf {

Distribution Distribution::from_shares(std::size_t tasks, std::uint32_t processors,
                                       std::vector<Share> shares)
{
    Distribution d;
    d.processors = processors;
    d.shares = std::move(shares);
    d.fixed.assign(processors, {});
    d.migrating.assign(processors, {});
    d.task_procs.assign(tasks, {});

    for (const auto& s : d.shares) {
        if (s.task.value >= tasks || s.processor.value >= processors) continue;
        auto& procs = d.task_procs[s.task.value];
        if (std::find(procs.begin(), procs.end(), s.processor) == procs.end())
            procs.push_back(s.processor);
    }
    for (std::size_t t = 0; t < tasks; ++t) {
        auto& procs = d.task_procs[t];
        std::sort(procs.begin(), procs.end());
        const TaskId id(static_cast<std::uint32_t>(t));
        for (const auto p : procs) {
            if (procs.size() == 1)
                d.fixed[p.value].push_back(id);
            else
                d.migrating[p.value].push_back(id);
        }
    }
    return d;
}

std::size_t Distribution::migrating_count() const
{
    return static_cast<std::size_t>(std::count_if(
        task_procs.begin(), task_procs.end(), [](const auto& p) { return p.size() >= 2; }));
}

std::optional<Rat> Distribution::share(TaskId task, ProcessorId proc) const
{
    std::optional<Rat> found;
    for (const auto& s : shares)
        if (s.task == task && s.processor == proc) found = found ? *found + s.value : s.value;
    return found;
}

Rat Distribution::task_total(TaskId task) const
{
    Rat sum;
    for (const auto& s : shares)
        if (s.task == task) sum += s.value;
    return sum;
}

Heuristic Heuristic::parse(const std::string& name, std::uint64_t seed)
{
    if (name == "seq" || name == "sequential") return sequential();
    if (name == "huf") return huf();
    if (name == "luf") return luf();
    if (name == "lef") return lef();
    if (name == "random" || name == "rand") return random(seed);
    throw std::invalid_argument("unknown heuristic '" + name + "'");
}

std::string Heuristic::name() const
{
    switch (kind) {
    case HeuristicKind::Sequential: return "seq";
    case HeuristicKind::HUF: return "huf";
    case HeuristicKind::LUF: return "luf";
    case HeuristicKind::LEF: return "lef";
    case HeuristicKind::Random: return "random";
    }
    return "?";
}

namespace {

/// Sequential bin filling over P_0, P_1, ...; at most one split per
/// processor boundary, so every split lands on consecutive processors.
class Filler {
public:
    Filler(const TaskSet& ts, const std::vector<Rat>& util) : ts_(ts), util_(util) {}

    const Rat& capacity() const { return cap_; }

    void place_fixed(TaskId t)
    {
        require_processor(proc_);
        shares_.push_back({t, ProcessorId(proc_), util_[t.value]});
        cap_ -= util_[t.value];
        if (cap_.sign() == 0) next_processor();
    }

    /// Precondition: util > capacity().
    void place_split(TaskId t)
    {
        require_processor(proc_ + 1);
        Rat rest = util_[t.value] - cap_;
        shares_.push_back({t, ProcessorId(proc_), cap_});
        shares_.push_back({t, ProcessorId(proc_ + 1), rest});
        ++proc_;
        cap_ = Rat(1) - rest;
        if (cap_.sign() == 0) next_processor();
    }

    /// Either fixes `t` (fits, or fills the processor exactly) or splits it.
    void place(TaskId t)
    {
        if (util_[t.value] <= cap_)
            place_fixed(t);
        else
            place_split(t);
    }

    Distribution finish() &&
    {
        return Distribution::from_shares(ts_.size(), ts_.processors(), std::move(shares_));
    }

private:
    void next_processor()
    {
        ++proc_;
        cap_ = 1;
    }

    void require_processor(std::uint32_t p) const
    {
        if (p >= ts_.processors())
            throw AssignmentError("processor capacity exhausted: total utilization exceeds " +
                                  std::to_string(ts_.processors()));
    }

    const TaskSet& ts_;
    const std::vector<Rat>& util_;
    std::vector<Share> shares_;
    std::uint32_t proc_ = 0;
    Rat cap_ = 1;
};

std::vector<TaskId> by_decreasing_utilization(const std::vector<Rat>& util)
{
    std::vector<TaskId> order(util.size());
    for (std::size_t i = 0; i < util.size(); ++i) order[i] = TaskId(static_cast<std::uint32_t>(i));
    std::stable_sort(order.begin(), order.end(),
                     [&](TaskId a, TaskId b) { return util[a.value] > util[b.value]; });
    return order;
}

Distribution run_heuristic(const TaskSet& ts, const Heuristic& h)
{
    std::vector<Rat> util;
    util.reserve(ts.size());
    for (const auto& t : ts.tasks()) util.push_back(utilization(t));

    Filler filler(ts, util);

    if (h.kind == HeuristicKind::Sequential || h.kind == HeuristicKind::Random ||
        h.kind == HeuristicKind::HUF) {
        std::vector<TaskId> order;
        if (h.kind == HeuristicKind::HUF) {
            order = by_decreasing_utilization(util);
        } else {
            order.resize(ts.size());
            for (std::size_t i = 0; i < ts.size(); ++i)
                order[i] = TaskId(static_cast<std::uint32_t>(i));
            if (h.kind == HeuristicKind::Random) {
                std::mt19937_64 rng(h.seed);
                std::shuffle(order.begin(), order.end(), rng);
            }
        }
        for (const auto t : order) filler.place(t);
        return std::move(filler).finish();
    }

    // LUF / LEF: fixed tasks in decreasing utilization; when the head does
    // not fit, pick the migrating task among those with u >= capacity.
    const std::vector<TaskId> order = by_decreasing_utilization(util);
    std::vector<bool> taken(order.size(), false);
    std::size_t head = 0;
    std::size_t remaining = order.size();

    while (remaining > 0) {
        while (taken[head]) ++head;
        const TaskId top = order[head];
        if (util[top.value] <= filler.capacity()) {
            taken[head] = true;
            --remaining;
            filler.place_fixed(top);
            continue;
        }

        // Candidates with u >= capacity form a prefix of `order`.
        const Rat& cap = filler.capacity();
        const auto prefix_end = static_cast<std::size_t>(
            std::partition_point(order.begin(), order.end(),
                                 [&](TaskId t) { return util[t.value] >= cap; }) -
            order.begin());

        std::size_t pick = order.size();
        if (h.kind == HeuristicKind::LUF) {
            // Reverse scan from the lowest utilization; among equal
            // utilizations the lowest id sits first in `order`.
            for (std::size_t i = prefix_end; i-- > head;) {
                if (taken[i]) continue;
                if (pick != order.size() && util[order[i].value] != util[order[pick].value]) break;
                pick = i;
            }
        } else {
            for (std::size_t i = head; i < prefix_end; ++i) {
                if (taken[i]) continue;
                if (pick == order.size()) {
                    pick = i;
                    continue;
                }
                const Task& cand = ts.tasks()[order[i].value];
                const Task& best = ts.tasks()[order[pick].value];
                if (cand.exec_cost() < best.exec_cost() ||
                    (cand.exec_cost() == best.exec_cost() && cand.id() < best.id()))
                    pick = i;
            }
        }
        taken[pick] = true;
        --remaining;
        filler.place(order[pick]);
    }
    return std::move(filler).finish();
}

}  // namespace

Distribution assign_tasks(const TaskSet& ts, const Heuristic& h)
{
    if (!feasible_edf_admissible(ts))
        throw AssignmentError(
            "task set is not admissible: every task must be light and U <= M (U = " +
            total_utilization(ts).to_string() + ", M = " + std::to_string(ts.processors()) + ")");
    return run_heuristic(ts, h);
}

Rat fraction_on_processor(const Distribution& d, TaskId task, ProcessorId proc)
{
    const auto s = d.share(task, proc);
    if (!s)
        throw AssignmentError("task " + std::to_string(task.value) + " has no share on processor " +
                              std::to_string(proc.value));
    return *s / d.task_total(task);
}

std::string to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::UnknownReference: return "unknown-reference";
    case ViolationKind::NonPositiveShare: return "non-positive-share";
    case ViolationKind::ShareExceedsLimit: return "share-exceeds-limit";
    case ViolationKind::TooManyProcessors: return "P1-too-many-processors";
    case ViolationKind::ShareSumMismatch: return "P1-share-sum";
    case ViolationKind::TooManyMigrating: return "P2-too-many-migrating";
    case ViolationKind::Overloaded: return "P3-overloaded";
    case ViolationKind::NonConsecutive: return "non-consecutive";
    case ViolationKind::InconsistentViews: return "inconsistent-views";
    }
    return "?";
}

std::vector<Violation> validate_distribution(const TaskSet& ts, const Distribution& d)
{
    std::vector<Violation> out;
    auto report = [&](ViolationKind k, std::string msg) { out.push_back({k, std::move(msg)}); };

    if (d.processors != ts.processors())
        report(ViolationKind::InconsistentViews,
               "distribution has " + std::to_string(d.processors) + " processors, task set has " +
                   std::to_string(ts.processors()));

    const std::size_t n = ts.size();
    const std::uint32_t m = ts.processors();
    std::vector<Rat> task_sum(n);
    std::vector<std::vector<ProcessorId>> procs(n);
    std::vector<Rat> proc_sum(m);

    for (const auto& s : d.shares) {
        if (s.task.value >= n || s.processor.value >= m) {
            report(ViolationKind::UnknownReference,
                   "share references task " + std::to_string(s.task.value) + " on processor " +
                       std::to_string(s.processor.value));
            continue;
        }
        const Rat u = utilization(ts[s.task]);
        const std::string where =
            "task " + std::to_string(s.task.value) + " on P" + std::to_string(s.processor.value);
        if (s.value.sign() <= 0) report(ViolationKind::NonPositiveShare, where + ": share <= 0");
        if (s.value > Rat(1) || s.value > u)
            report(ViolationKind::ShareExceedsLimit,
                   where + ": share " + s.value.to_string() + " exceeds min(1, u)");
        auto& p = procs[s.task.value];
        if (std::find(p.begin(), p.end(), s.processor) != p.end())
            report(ViolationKind::InconsistentViews, where + ": duplicate share entry");
        else
            p.push_back(s.processor);
        task_sum[s.task.value] += s.value;
        proc_sum[s.processor.value] += s.value;
    }

    std::vector<std::size_t> migrating_on(m, 0);
    for (std::size_t t = 0; t < n; ++t) {
        const std::string who = "task " + std::to_string(t);
        auto& p = procs[t];
        std::sort(p.begin(), p.end());
        if (p.size() > 2)
            report(ViolationKind::TooManyProcessors,
                   who + ": shares on " + std::to_string(p.size()) + " processors");
        const Rat u = utilization(ts.tasks()[t]);
        if (task_sum[t] != u)
            report(ViolationKind::ShareSumMismatch,
                   who + ": shares sum to " + task_sum[t].to_string() + ", utilization is " +
                       u.to_string());
        if (p.size() == 2 && p[1].value != p[0].value + 1)
            report(ViolationKind::NonConsecutive, who + ": processors P" +
                                                      std::to_string(p[0].value) + " and P" +
                                                      std::to_string(p[1].value));
        if (p.size() >= 2)
            for (const auto q : p) ++migrating_on[q.value];
    }
    for (std::uint32_t j = 0; j < m; ++j) {
        if (migrating_on[j] > 2)
            report(ViolationKind::TooManyMigrating,
                   "P" + std::to_string(j) + " hosts " + std::to_string(migrating_on[j]) +
                       " migrating tasks");
        if (proc_sum[j] > Rat(1))
            report(ViolationKind::Overloaded,
                   "P" + std::to_string(j) + " share sum " + proc_sum[j].to_string() + " > 1");
    }

    if (d.processors == m) {
        const Distribution derived = Distribution::from_shares(n, m, d.shares);
        if (derived.fixed != d.fixed || derived.migrating != d.migrating ||
            derived.task_procs != d.task_procs)
            report(ViolationKind::InconsistentViews,
                   "fixed/migrating/task_procs views disagree with the shares");
    }
    return out;
}

AssignOutcome assign_non_light(const TaskSet& ts, const Heuristic& h)
{
    AssignOutcome outcome;
    if (total_utilization(ts) > Rat(ts.processors())) {
        outcome.failure = "total utilization exceeds the processor count";
        return outcome;
    }
    for (const auto& t : ts.tasks())
        if (utilization(t) > Rat(1)) {
            outcome.failure = "task " + std::to_string(t.id().value) + " has utilization above 1";
            return outcome;
        }

    Distribution d;
    try {
        d = run_heuristic(ts, h);
    } catch (const AssignmentError& e) {
        outcome.failure = e.what();
        return outcome;
    }
    for (std::uint32_t j = 0; j < d.processors; ++j) {
        const auto& mig = d.migrating[j];
        if (mig.size() < 2) continue;
        Rat sum;
        for (const auto t : mig) sum += utilization(ts[t]);
        if (sum > Rat(1)) {
            outcome.failure = "P" + std::to_string(j) + ": migrating tasks have combined utilization " +
                              sum.to_string() + " > 1";
            return outcome;
        }
    }
    outcome.distribution = std::move(d);
    return outcome;
}

void write_distribution(std::ostream& out, const Distribution& d)
{
    out << "M=" << d.processors << '\n';
    std::vector<Share> sorted = d.shares;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Share& a, const Share& b) {
        return a.task != b.task ? a.task < b.task : a.processor < b.processor;
    });
    for (const auto& s : sorted) {
        const bool mig = s.task.value < d.task_procs.size() && d.is_migrating(s.task);
        out << s.task.value << ' ' << s.processor.value << ' ' << s.value.num_string() << '/'
            << s.value.den_string() << ' ' << (mig ? "migrating" : "fixed") << '\n';
    }
}

Distribution parse_distribution(std::istream& in, std::size_t tasks, std::uint32_t processors)
{
    std::vector<Share> shares;
    std::vector<std::pair<std::size_t, std::string>> claimed;  // share index, label
    std::string line;
    std::size_t line_no = 0;
    std::size_t max_task = 0;
    std::uint32_t max_proc = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::string a;
        if (!(fields >> a)) continue;
        if (a.rfind("M=", 0) == 0) {
            if (processors == 0) processors = static_cast<std::uint32_t>(std::stoul(a.substr(2)));
            continue;
        }
        std::string p, v, label;
        if (!(fields >> p >> v))
            throw ModelError("line " + std::to_string(line_no) +
                             ": expected 'task proc share [fixed|migrating]'");
        fields >> label;
        Share s;
        try {
            s.task = TaskId(static_cast<std::uint32_t>(std::stoul(a)));
            s.processor = ProcessorId(static_cast<std::uint32_t>(std::stoul(p)));
            s.value = Rat::parse(v);
        } catch (const std::exception& e) {
            throw ModelError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!label.empty() && label != "fixed" && label != "migrating")
            throw ModelError("line " + std::to_string(line_no) + ": unknown label '" + label + "'");
        max_task = std::max<std::size_t>(max_task, s.task.value + 1);
        max_proc = std::max(max_proc, s.processor.value + 1);
        if (!label.empty()) claimed.emplace_back(shares.size(), label);
        shares.push_back(std::move(s));
    }
    if (tasks == 0) tasks = max_task;
    if (processors == 0) processors = max_proc;
    Distribution d = Distribution::from_shares(tasks, processors, std::move(shares));
    for (const auto& [idx, label] : claimed) {
        const auto& s = d.shares[idx];
        if (s.task.value >= tasks) continue;
        if ((label == "migrating") != d.is_migrating(s.task))
            throw ModelError("task " + std::to_string(s.task.value) + " is labelled " + label +
                             " but has " + std::to_string(d.task_procs[s.task.value].size()) +
                             " share(s)");
    }
    return d;
}

Distribution load_distribution(const std::string& path, std::size_t tasks,
                               std::uint32_t processors)
{
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open distribution file '" + path + "'");
    try {
        return parse_distribution(in, tasks, processors);
    } catch (const ModelError& e) {
        throw ModelError(path + ": " + e.what());
    }
}

}  // namespace fedf
