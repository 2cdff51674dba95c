#include <doctest.h>

#include "fedf/engine.hpp"
#include "fedf/schedulability.hpp"
#include "gen_util.hpp"

#include <cmath>
#include <numeric>

using namespace fedf;

namespace {

Task T(std::uint32_t id, Rat e, Rat p) { return Task::make(TaskId(id), std::move(e), std::move(p)); }

}  // namespace

TEST_CASE("uniprocessor EDF test")
{
    const auto a = edf_uniprocessor_test(TaskSet({T(0, 1, 2), T(1, 1, 3)}, 1));
    CHECK(a.schedulable);
    CHECK(a.total_utilization == Rat(5, 6));
    CHECK(std::get<Rat>(a.bound) == Rat(1));
    CHECK_FALSE(edf_uniprocessor_test(TaskSet({T(0, 1, 2), T(1, 2, 3)}, 1)).schedulable);

    const TaskSet full({T(0, 1, 1)}, 1);
    CHECK(edf_uniprocessor_test(full).schedulable);
    const auto oracle = brute_force_oracle(full, 1, 12);
    CHECK(oracle.stats.per_task[0].misses == 0);
    CHECK(oracle.stats.busy[0] == Rat(12));

    CHECK_THROWS_AS(edf_uniprocessor_test(TaskSet({T(0, 1, 2)}, 2)), ModelError);
}

TEST_CASE("rate-monotonic bound")
{
    CHECK(rm_utilization_bound(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(rm_utilization_bound(2) - 2.0 * (std::sqrt(2.0) - 1.0)) < 1e-13);
    CHECK(std::abs(rm_utilization_bound(2) - 0.828427) < 1e-6);
    CHECK(std::abs(rm_utilization_bound(1'000'000) - 0.693147) < 1e-5);
    CHECK_THROWS(rm_utilization_bound(0));

    // Independent evaluation via pow for moderate n.
    for (std::uint64_t n = 1; n <= 64; ++n) {
        const double nn = static_cast<double>(n);
        CHECK(std::abs(rm_utilization_bound(n) - nn * (std::pow(2.0, 1.0 / nn) - 1.0)) < 1e-12);
    }
    double prev = rm_utilization_bound(1);
    for (std::uint64_t n : {2ULL, 3ULL, 10ULL, 100ULL, 10'000ULL, 1'000'000ULL, 1'000'000'000ULL}) {
        const double b = rm_utilization_bound(n);
        CHECK(b < prev);
        CHECK(b > std::log(2.0));
        prev = b;
    }
}

TEST_CASE("rate-monotonic sufficient test")
{
    const auto a = rm_sufficient_test(TaskSet({T(0, 1, 2), T(1, 1, 3)}, 1));
    CHECK_FALSE(a.schedulable);
    CHECK(std::get<double>(a.bound) == doctest::Approx(0.828427).epsilon(1e-6));
    CHECK(rm_sufficient_test(TaskSet({T(0, 1, 4), T(1, 1, 4)}, 1)).schedulable);
    CHECK(rm_sufficient_test(TaskSet({T(0, 3, 3)}, 1)).schedulable);
    CHECK_THROWS_AS(rm_sufficient_test(TaskSet({T(0, 1, 2)}, 3)), ModelError);
}

TEST_CASE("feasible EDF admissibility")
{
    CHECK(feasible_edf_admissible(TaskSet({T(0, 1, 2), T(1, 1, 2), T(2, 1, 2)}, 2)));
    CHECK_FALSE(feasible_edf_admissible(TaskSet({T(0, 3, 5)}, 4)));
    CHECK_FALSE(feasible_edf_admissible(TaskSet({T(0, 1, 2), T(1, 1, 2), T(2, 1, 2)}, 1)));
}

TEST_CASE("EDF verdict implies no oracle misses over the hyperperiod")
{
    std::mt19937_64 rng(3);
    int checked = 0;
    while (checked < 300) {
        const int n = static_cast<int>(testgen::uniform(rng, 1, 3));
        std::vector<Task> tasks;
        std::int64_t h = 1;
        for (int i = 0; i < n; ++i) {
            const std::int64_t p = testgen::uniform(rng, 1, 10);
            tasks.push_back(T(static_cast<std::uint32_t>(i), testgen::uniform(rng, 1, p), p));
            h = std::lcm(h, p);
        }
        const TaskSet ts(std::move(tasks), 1);
        const auto v = edf_uniprocessor_test(ts);
        const auto o = brute_force_oracle(ts, 1, Rat(2 * h));
        std::uint64_t misses = 0;
        for (const auto& s : o.stats.per_task) misses += s.misses;
        misses += o.stats.unfinished_overdue;
        if (v.schedulable) CHECK(misses == 0);
        else CHECK(misses > 0);
        ++checked;
    }
}
