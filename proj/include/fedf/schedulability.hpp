#ifndef FEDF_SCHEDULABILITY_HPP
#define FEDF_SCHEDULABILITY_HPP

#include "fedf/task_model.hpp"

#include <cstdint>
#include <variant>

namespace fedf {

/// Outcome of a utilization-based test. `bound` is exact for EDF and a
/// double for the rate-monotonic bound, which is irrational for n > 1.
struct TestVerdict {
    bool schedulable = false;
    std::variant<Rat, double> bound;
    Rat total_utilization;

    double bound_value() const;
};

/// Uniprocessor EDF with implicit deadlines: schedulable iff U <= 1.
TestVerdict edf_uniprocessor_test(const TaskSet& ts);

/// n (2^{1/n} - 1), accurate to well beyond 12 significant digits.
double rm_utilization_bound(std::uint64_t n);

/// Liu & Layland sufficient test. A negative verdict proves nothing.
TestVerdict rm_sufficient_test(const TaskSet& ts);

/// Every task light and U <= M.
bool feasible_edf_admissible(const TaskSet& ts);

}  // namespace fedf

#endif  // FEDF_SCHEDULABILITY_HPP
