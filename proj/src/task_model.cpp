#include "fedf/task_model.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fedf {

Task Task::make(TaskId id, Rat exec_cost, Rat period, ReleaseModel model, Rat jitter,
                Rat first_release)
{
    if (exec_cost.sign() <= 0)
        throw ModelError("task " + std::to_string(id.value) + ": execution cost must be positive");
    if (exec_cost > period)
        throw ModelError("task " + std::to_string(id.value) +
                         ": execution cost exceeds period");
    if (jitter.sign() < 0)
        throw ModelError("task " + std::to_string(id.value) + ": negative jitter");
    if (first_release.sign() < 0)
        throw ModelError("task " + std::to_string(id.value) + ": negative first release");

    Task t;
    t.id_ = id;
    t.exec_cost_ = std::move(exec_cost);
    t.period_ = std::move(period);
    t.jitter_ = std::move(jitter);
    t.first_release_ = std::move(first_release);
    t.model_ = model;
    return t;
}

Rat Task::periodic_release(std::uint64_t k) const
{
    if (k == 0) throw ModelError("job indices start at 1");
    return first_release_ + Rat(static_cast<std::int64_t>(k - 1)) * period_;
}

TaskSet::TaskSet(std::vector<Task> tasks, std::uint32_t processors)
    : tasks_(std::move(tasks)), processors_(processors)
{
    if (tasks_.empty()) throw ModelError("task set is empty");
    if (processors_ == 0) throw ModelError("task set needs at least one processor");
    for (std::size_t i = 0; i < tasks_.size(); ++i)
        if (tasks_[i].id().value != i)
            throw ModelError("task ids must be dense 0..n-1 in order; found id " +
                             std::to_string(tasks_[i].id().value) + " at position " +
                             std::to_string(i));
}

Rat utilization(const Task& task)
{
    return task.exec_cost() / task.period();
}

Rat total_utilization(const TaskSet& ts)
{
    Rat sum;
    for (const auto& t : ts.tasks()) sum += utilization(t);
    return sum;
}

bool is_light(const Task& task)
{
    return utilization(task) <= Rat(1, 2);
}

Rat job_tardiness(const Rat& completion, const Rat& abs_deadline)
{
    return completion > abs_deadline ? completion - abs_deadline : Rat(0);
}

Rat max_utilization(const TaskSet& ts)
{
    Rat best;
    for (const auto& t : ts.tasks()) best = max(best, utilization(t));
    return best;
}

namespace {

std::string strip_comment(const std::string& line)
{
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

Rat parse_field(const std::string& token, std::size_t line_no, const char* what)
{
    try {
        return Rat::parse(token);
    } catch (const std::exception& e) {
        throw ModelError("line " + std::to_string(line_no) + ": bad " + what + " '" + token +
                         "': " + e.what());
    }
}

}  // namespace

TaskSet parse_taskset(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    long long processors = -1;
    std::vector<Task> tasks;

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(strip_comment(line));
        std::string first;
        if (!(fields >> first)) continue;

        if (processors < 0) {
            std::string header = first;
            std::string rest;
            while (fields >> rest) header += rest;
            if (header.rfind("M=", 0) != 0)
                throw ModelError("line " + std::to_string(line_no) + ": expected header M=<int>");
            try {
                std::size_t used = 0;
                processors = std::stoll(header.substr(2), &used);
                if (used != header.size() - 2) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ModelError("line " + std::to_string(line_no) + ": bad processor count");
            }
            if (processors <= 0 || processors > 1'000'000)
                throw ModelError("line " + std::to_string(line_no) + ": bad processor count");
            continue;
        }

        std::string exec_tok, period_tok;
        if (!(fields >> exec_tok >> period_tok))
            throw ModelError("line " + std::to_string(line_no) +
                             ": expected 'id exec_cost period [sporadic]'");
        long long id = -1;
        try {
            std::size_t used = 0;
            id = std::stoll(first, &used);
            if (used != first.size()) id = -1;
        } catch (const std::exception&) {
        }
        if (id < 0) throw ModelError("line " + std::to_string(line_no) + ": bad task id");

        ReleaseModel model = ReleaseModel::Periodic;
        Rat jitter;
        Rat offset;
        std::string opt;
        while (fields >> opt) {
            if (opt == "sporadic")
                model = ReleaseModel::Sporadic;
            else if (opt == "periodic")
                model = ReleaseModel::Periodic;
            else if (opt.rfind("jitter=", 0) == 0)
                jitter = parse_field(opt.substr(7), line_no, "jitter");
            else if (opt.rfind("offset=", 0) == 0)
                offset = parse_field(opt.substr(7), line_no, "offset");
            else
                throw ModelError("line " + std::to_string(line_no) + ": unknown token '" + opt +
                                 "'");
        }
        try {
            tasks.push_back(Task::make(TaskId(static_cast<std::uint32_t>(id)),
                                       parse_field(exec_tok, line_no, "execution cost"),
                                       parse_field(period_tok, line_no, "period"), model,
                                       std::move(jitter), std::move(offset)));
        } catch (const ModelError& e) {
            const std::string msg = e.what();
            if (msg.rfind("line ", 0) == 0) throw;
            throw ModelError("line " + std::to_string(line_no) + ": " + msg);
        }
    }
    if (processors < 0) throw ModelError("missing header M=<int>");
    std::sort(tasks.begin(), tasks.end(),
              [](const Task& a, const Task& b) { return a.id() < b.id(); });
    return TaskSet(std::move(tasks), static_cast<std::uint32_t>(processors));
}

TaskSet load_taskset(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open task set file '" + path + "'");
    try {
        return parse_taskset(in);
    } catch (const ModelError& e) {
        throw ModelError(path + ": " + e.what());
    }
}

void write_taskset(std::ostream& out, const TaskSet& ts)
{
    out << "M=" << ts.processors() << '\n';
    for (const auto& t : ts.tasks()) {
        out << t.id().value << ' ' << t.exec_cost() << ' ' << t.period();
        if (t.is_sporadic()) out << " sporadic";
        if (t.first_release().sign() != 0) out << " offset=" << t.first_release();
        if (t.jitter().sign() != 0) out << " jitter=" << t.jitter();
        out << '\n';
    }
}

}  // namespace fedf
