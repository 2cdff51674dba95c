#ifndef FEDF_TESTS_GEN_UTIL_HPP
#define FEDF_TESTS_GEN_UTIL_HPP

// Small hand-rolled generators shared by the property tests.

#include "fedf/task_model.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace fedf::testgen {

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi)
{
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Rational with numerator in [-lim, lim] and denominator in [1, lim].
inline Rat small_rat(std::mt19937_64& rng, std::int64_t lim = 1000)
{
    return Rat(uniform(rng, -lim, lim), uniform(rng, 1, lim));
}

/// Mixes tiny, huge and 64-bit-boundary magnitudes so both Rat paths get hit.
inline Rat wild_rat(std::mt19937_64& rng)
{
    switch (uniform(rng, 0, 3)) {
    case 0: return small_rat(rng, 20);
    case 1: return Rat(uniform(rng, INT64_MIN + 1, INT64_MAX), uniform(rng, 1, INT64_MAX));
    case 2: {
        Rat r = small_rat(rng, 1'000'000'000);
        for (int i = 0, n = static_cast<int>(uniform(rng, 1, 4)); i < n; ++i)
            r *= Rat(uniform(rng, 1, INT64_MAX), uniform(rng, 1, INT64_MAX));
        return r;
    }
    default: return Rat(uniform(rng, -1'000'000, 1'000'000), uniform(rng, 1, 1'000'000)) +
                    Rat(1, uniform(rng, 1, INT64_MAX));
    }
}

/// Light integer task set with U <= M, built by filling each processor.
inline TaskSet light_set(std::mt19937_64& rng, std::uint32_t m, std::int64_t max_period = 30)
{
    std::vector<Task> tasks;
    Rat total;
    const Rat cap(m);
    for (int guard = 0; guard < 400; ++guard) {
        const std::int64_t p = uniform(rng, 2, max_period);
        const std::int64_t e = uniform(rng, 1, p / 2);
        const Rat u(e, p);
        if (total + u > cap) break;
        tasks.push_back(Task::make(TaskId(static_cast<std::uint32_t>(tasks.size())), Rat(e), Rat(p)));
        total += u;
    }
    if (tasks.empty()) tasks.push_back(Task::make(TaskId(0), Rat(1), Rat(2)));
    return TaskSet(std::move(tasks), m);
}

}  // namespace fedf::testgen

#endif  // FEDF_TESTS_GEN_UTIL_HPP
