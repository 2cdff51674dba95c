#include <doctest.h>

#include "fedf/job_distribution.hpp"
#include "gen_util.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <set>

using namespace fedf;

namespace {

Task T(std::uint32_t id, Rat e, Rat p) { return Task::make(TaskId(id), std::move(e), std::move(p)); }
Weight W(std::int64_t a, std::int64_t b) { return Weight(Rat(a, b)); }

// Integer-only window endpoints for weight x/y.
std::uint64_t rel(std::uint64_t x, std::uint64_t y, std::uint64_t i) { return (i - 1) * y / x; }
std::uint64_t dl(std::uint64_t x, std::uint64_t y, std::uint64_t i) { return (i * y + x - 1) / x; }

JobMap map_for(std::int64_t x, std::int64_t y)
{
    // A migrating task with fractions x/y and (y-x)/y on P0/P1.
    const Rat u(1, 2);
    const Rat s0 = u * Rat(x, y);
    auto d = Distribution::from_shares(
        1, 2, {{TaskId(0), ProcessorId(0), s0}, {TaskId(0), ProcessorId(1), u - s0}});
    return build_job_map(d, TaskId(0));
}

}  // namespace

TEST_CASE("subtask windows")
{
    CHECK(subtask_release(W(3, 7), 1) == 0);
    CHECK(subtask_deadline(W(3, 7), 1) == 3);
    CHECK(subtask_release(W(7, 8), 7) == 6);
    CHECK(subtask_deadline(W(7, 8), 1) == 2);
    for (std::uint64_t k = 1; k <= 20; ++k) {
        CHECK(subtask_release(W(1, 1), k) == k - 1);
        CHECK(subtask_deadline(W(1, 1), k) == k);
    }
    CHECK_THROWS(subtask_release(W(1, 2), 0));
    CHECK_THROWS(subtask_deadline(W(1, 2), 0));
    CHECK_THROWS(Weight(Rat(0)));
    CHECK_THROWS(Weight(Rat(3, 2)));

    const Window w = subtask_window(W(3, 7), 2);
    CHECK(w.subtask_index == 2);
    CHECK(w.release_slot == 2);
    CHECK(w.deadline_slot == 5);
}

TEST_CASE("windows are valid and monotone for all small weights")
{
    for (std::uint64_t y = 1; y <= 12; ++y)
        for (std::uint64_t x = 1; x <= y; ++x) {
            const Weight w(Rat(static_cast<std::int64_t>(x), static_cast<std::int64_t>(y)));
            for (std::uint64_t i = 1; i <= 3 * y; ++i) {
                CHECK(subtask_release(w, i) == rel(x, y, i));
                CHECK(subtask_deadline(w, i) == dl(x, y, i));
                CHECK(subtask_release(w, i) < subtask_deadline(w, i));
                CHECK(subtask_release(w, i + 1) >= subtask_release(w, i));
                CHECK(subtask_deadline(w, i + 1) >= subtask_deadline(w, i));
            }
        }
}

TEST_CASE("lag")
{
    bool sched[3] = {false, false, false};
    CHECK(lag(W(3, 7), sched, 0) == Rat(0));
    sched[2] = true;
    CHECK(lag(W(3, 7), sched, 3) == Rat(2, 7));
    CHECK_THROWS(lag(W(3, 7), sched, 4));

    bool even[20] = {};
    for (std::size_t t = 0; t < 20; t += 2) even[t] = true;
    for (std::uint64_t k = 0; k <= 10; ++k) CHECK(lag(W(1, 2), even, 2 * k) == Rat(0));
}

TEST_CASE("pfair check")
{
    bool never[3] = {false, false, false};
    CHECK_FALSE(is_pfair(W(3, 7), never, 3));
    bool all[10];
    std::fill(std::begin(all), std::end(all), true);
    CHECK(is_pfair(W(1, 1), all, 10));
}

TEST_CASE("complementary weights")
{
    CHECK(is_complementary(W(1, 8), W(7, 8)));
    CHECK(is_complementary(W(1, 2), W(1, 2)));
    CHECK_FALSE(is_complementary(W(1, 3), W(1, 3)));
}

TEST_CASE("any in-window placement is pfair")
{
    std::mt19937_64 rng(12);
    for (std::uint64_t y = 1; y <= 12; ++y)
        for (std::uint64_t x = 1; x <= y; ++x) {
            const Weight w(Rat(static_cast<std::int64_t>(x), static_cast<std::int64_t>(y)));
            for (int trial = 0; trial < 20; ++trial) {
                std::unique_ptr<bool[]> sched(new bool[3 * y]());
                std::uint64_t next_free = 0;
                for (std::uint64_t i = 1; i <= 3 * x; ++i) {
                    const auto lo = std::max(rel(x, y, i), next_free), hi = dl(x, y, i) - 1;
                    REQUIRE(lo <= hi);
                    const auto s = static_cast<std::uint64_t>(
                        testgen::uniform(rng, static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
                    sched[s] = true;
                    next_free = s + 1;
                }
                CHECK(is_pfair(w, std::span<const bool>(sched.get(), 3 * y), 3 * y));
            }
        }
}

TEST_CASE("job map for fractions 1/8 and 7/8 sends one job in eight to the first processor")
{
    // Task 6 of a set whose fill leaves P1 with 1/20 when T(2, 5) arrives.
    const TaskSet ts({T(0, 1, 4), T(1, 1, 4), T(2, 1, 2), T(3, 1, 2), T(4, 1, 4), T(5, 1, 5), T(6, 2, 5)}, 3);
    const Distribution d = assign_tasks(ts, Heuristic::sequential());
    const JobMap m = build_job_map(d, TaskId(6));
    CHECK(m.first_proc == ProcessorId(1));
    CHECK(m.second_proc == ProcessorId(2));
    CHECK(m.f_first == Rat(1, 8));
    CHECK(m.f_second == Rat(7, 8));
    CHECK(m.cycle_length == Rat(8));
    for (std::uint64_t k = 1; k <= 80; ++k)
        CHECK(job_processor(m, k) == ((k - 1) % 8 == 0 ? ProcessorId(1) : ProcessorId(2)));
    CHECK(job_processor(m, 1) == ProcessorId(1));
    CHECK(job_processor(m, 5) == ProcessorId(2));
    CHECK_THROWS(build_job_map(d, TaskId(0)));
}

TEST_CASE("equal fractions alternate")
{
    const JobMap m = map_for(1, 2);
    for (std::uint64_t k = 1; k <= 40; ++k)
        CHECK(job_processor(m, k) == ProcessorId(k % 2 == 1 ? 0 : 1));
}

TEST_CASE("job rule matches first-slot and last-slot windows")
{
    for (std::int64_t y = 2; y <= 12; ++y)
        for (std::int64_t x = 1; x < y; ++x) {
            if (std::gcd(x, y) != 1) continue;
            const JobMap m = map_for(x, y);
            const auto ux = static_cast<std::uint64_t>(x), uy = static_cast<std::uint64_t>(y);
            std::set<std::uint64_t> first, last;
            for (std::uint64_t g = 1; g <= 10 * ux + 1; ++g) first.insert(rel(ux, uy, g));
            for (std::uint64_t h = 1; h <= 10 * (uy - ux) + 1; ++h) last.insert(dl(uy - ux, uy, h) - 1);
            for (std::uint64_t k = 1; k <= 10 * uy; ++k) {
                const std::uint64_t s = k - 1;
                const bool in_first = first.count(s) > 0, in_last = last.count(s) > 0;
                CHECK(in_first != in_last);
                CHECK(job_processor(m, k) == (in_first ? m.first_proc : m.second_proc));
                CHECK(job_processor(m, k) == job_processor(m, k + uy));
            }
        }
}

TEST_CASE("job-count bound over consecutive jobs")
{
    CHECK(lemma1_bound(8, Rat(1, 8)) == 1);
    CHECK(lemma1_bound(0, Rat(3, 7)) == 0);
    CHECK(lemma1_bound(4, Rat(7, 8)) == 4);

    for (std::int64_t y = 2; y <= 12; ++y)
        for (std::int64_t x = 1; x < y; ++x) {
            if (std::gcd(x, y) != 1) continue;
            const JobMap m = map_for(x, y);
            const std::size_t n = 3 * static_cast<std::size_t>(y) + 60;
            std::vector<int> on_first(n + 1, 0);
            for (std::size_t k = 1; k <= n; ++k)
                on_first[k] = on_first[k - 1] + (job_processor(m, k) == m.first_proc ? 1 : 0);
            for (std::size_t o = 0; o < static_cast<std::size_t>(y); ++o)
                for (std::size_t l = 0; o + l <= n; ++l) {
                    const int a = on_first[o + l] - on_first[o];
                    const int b = static_cast<int>(l) - a;
                    CHECK(a <= static_cast<int>(lemma1_bound(l, m.f_first)));
                    CHECK(b <= static_cast<int>(lemma1_bound(l, m.f_second)));
                }
        }
}

TEST_CASE("maps with huge cycles still route by job number")
{
    const Rat big(INT64_MAX - 24);
    const Rat f = Rat(1) / big;
    const Rat u(1, 2);
    auto d = Distribution::from_shares(
        1, 2, {{TaskId(0), ProcessorId(0), u * f}, {TaskId(0), ProcessorId(1), u - u * f}});
    const JobMap m = build_job_map(d, TaskId(0));
    CHECK(m.cycle_length == big);
    CHECK(job_processor(m, 1) == ProcessorId(0));
    for (std::uint64_t k = 2; k <= 50; ++k) CHECK(job_processor(m, k) == ProcessorId(1));
}
