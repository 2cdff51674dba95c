#include "fedf/schedulability.hpp"

#include <cmath>
#include <numbers>

namespace fedf {

double TestVerdict::bound_value() const
{
    if (const auto* exact = std::get_if<Rat>(&bound)) return exact->to_double();
    return std::get<double>(bound);
}

namespace {

void require_uniprocessor(const TaskSet& ts, const char* test)
{
    if (ts.processors() != 1)
        throw ModelError(std::string(test) + " test applies to uniprocessor task sets (M=1), got M=" +
                         std::to_string(ts.processors()));
}

}  // namespace

TestVerdict edf_uniprocessor_test(const TaskSet& ts)
{
    require_uniprocessor(ts, "EDF");
    TestVerdict v;
    v.total_utilization = total_utilization(ts);
    v.bound = Rat(1);
    v.schedulable = v.total_utilization <= Rat(1);
    return v;
}

double rm_utilization_bound(std::uint64_t n)
{
    if (n == 0) throw ModelError("RM bound needs at least one task");
    if (n == 1) return 1.0;
    // expm1 keeps full precision where 2^{1/n} - 1 would cancel for large n.
    const double nd = static_cast<double>(n);
    return nd * std::expm1(std::numbers::ln2 / nd);
}

TestVerdict rm_sufficient_test(const TaskSet& ts)
{
    require_uniprocessor(ts, "RM");
    TestVerdict v;
    v.total_utilization = total_utilization(ts);
    const double bound = rm_utilization_bound(ts.size());
    v.bound = bound;
    v.schedulable = v.total_utilization <= Rat::from_double(bound);
    return v;
}

bool feasible_edf_admissible(const TaskSet& ts)
{
    for (const auto& t : ts.tasks())
        if (!is_light(t)) return false;
    return total_utilization(ts) <= Rat(ts.processors());
}

}  // namespace fedf
