#include <doctest.h>

#include "fedf/efdf_uniform.hpp"
#include "gen_util.hpp"

#include <algorithm>
#include <set>
#include <sstream>

using namespace fedf;

namespace {

ReadyTask R(std::uint32_t id, Rat deadline, Rat remaining, std::optional<std::size_t> last = std::nullopt)
{
    return {TaskId(id), std::move(deadline), std::move(remaining), last};
}

}  // namespace

TEST_CASE("platform validation")
{
    CHECK_THROWS_AS(UniformPlatform({}), ModelError);
    CHECK_THROWS_AS(UniformPlatform({Rat(1), Rat(2)}), ModelError);
    CHECK_THROWS_AS(UniformPlatform({Rat(1), Rat(0)}), ModelError);
    CHECK(UniformPlatform({Rat(2), Rat(2), Rat(1, 2)}).size() == 3);
}

TEST_CASE("feasibility split")
{
    const UniformPlatform one({Rat(1)});
    auto s = partition_feasible({R(0, 3, 2)}, 0, one);
    CHECK(s.can_meet.size() == 1);
    s = partition_feasible({R(0, 1, 2)}, 0, one);
    CHECK(s.late.size() == 1);
    s = partition_feasible({R(0, 1, 1), R(1, 2, 1)}, 5, one);
    CHECK(s.can_meet.empty());
    CHECK(s.late.size() == 2);
    // Faster fastest node rescues a task.
    s = partition_feasible({R(0, 1, 2)}, 0, UniformPlatform({Rat(2)}));
    CHECK(s.can_meet.size() == 1);
    CHECK_THROWS_AS(partition_feasible({R(0, 1, 0)}, 0, one), ModelError);
}

TEST_CASE("dispatch examples")
{
    SUBCASE("pure affinity")
    {
        const UniformPlatform p({Rat(3), Rat(2), Rat(1)});
        const auto out = dispatch({R(0, 10, 1, 2), R(1, 11, 1, 0), R(2, 12, 1, 1), R(3, 20, 1)}, 0, p);
        CHECK(out[0] == TaskId(1));
        CHECK(out[1] == TaskId(2));
        CHECK(out[2] == TaskId(0));
    }
    SUBCASE("one task, one node")
    {
        const auto out = dispatch({R(4, 5, 1)}, 0, UniformPlatform({Rat(1)}));
        CHECK(out[0] == TaskId(4));
    }
    SUBCASE("one feasible, one late, two nodes")
    {
        const UniformPlatform p({Rat(1), Rat(1)});
        const auto out = dispatch({R(0, 10, 2), R(1, 1, 5)}, 0, p);
        CHECK(out[0] == TaskId(0));
        CHECK(out[1] == TaskId(1));
        const auto no_late = dispatch({R(0, 10, 2), R(1, 1, 5)}, 0, p, false);
        CHECK(no_late[0] == TaskId(0));
        CHECK_FALSE(no_late[1].has_value());
    }
    SUBCASE("affinity outside the top nodes is ignored")
    {
        // k = 1, so only node 0 takes tasks from A; the task's last node 1 is not < 1.
        const UniformPlatform p({Rat(1), Rat(1)});
        const auto out = dispatch({R(0, 10, 2, 1)}, 0, p);
        CHECK(out[0] == TaskId(0));
        CHECK_FALSE(out[1].has_value());
    }
    SUBCASE("deadline ties break by id")
    {
        const auto out = dispatch({R(3, 5, 1), R(1, 5, 1), R(2, 5, 1)}, 0, UniformPlatform({Rat(1), Rat(1)}));
        CHECK(out[0] == TaskId(1));
        CHECK(out[1] == TaskId(2));
    }
}

TEST_CASE("dispatch properties on random states")
{
    std::mt19937_64 rng(123);
    for (int iter = 0; iter < 2000; ++iter) {
        const auto m = static_cast<std::size_t>(testgen::uniform(rng, 1, 5));
        std::vector<Rat> speeds;
        for (std::size_t j = 0; j < m; ++j) speeds.push_back(Rat(testgen::uniform(rng, 1, 6), 2));
        std::sort(speeds.begin(), speeds.end(), std::greater<>());
        const UniformPlatform p(speeds);
        const auto n = static_cast<std::uint32_t>(testgen::uniform(rng, 0, 8));
        DispatchState st;
        for (std::uint32_t i = 0; i < n; ++i) {
            std::optional<std::size_t> last;
            if (testgen::uniform(rng, 0, 2) > 0) last = static_cast<std::size_t>(testgen::uniform(rng, 0, 5));
            st.push_back(R(i, testgen::uniform(rng, 0, 20), Rat(testgen::uniform(rng, 1, 12), 2), last));
        }
        const Rat now(testgen::uniform(rng, 0, 6));
        const auto out = dispatch(st, now, p);
        const auto split = partition_feasible(st, now, p);
        REQUIRE(out.size() == m);

        std::set<std::uint32_t> used;
        for (const auto& t : out)
            if (t) CHECK(used.insert(t->value).second);

        const std::size_t k = split.can_meet.size(), top = std::min(k, m);
        // Affinity: a top task whose last node is below `top` sits there,
        // unless an earlier top task claimed the same node.
        std::set<std::size_t> claimed;
        for (std::size_t i = 0; i < top; ++i) {
            const auto& e = split.can_meet[i];
            if (e.last_node && *e.last_node < top && claimed.insert(*e.last_node).second)
                CHECK(out[*e.last_node] == e.task);
        }
        // Nodes [0, top) run exactly the top tasks of A.
        std::set<std::uint32_t> expected, got;
        for (std::size_t i = 0; i < top; ++i) expected.insert(split.can_meet[i].task.value);
        for (std::size_t j = 0; j < top; ++j) {
            REQUIRE(out[j].has_value());
            got.insert(out[j]->value);
        }
        CHECK(expected == got);
        // Remaining nodes take B in deadline order.
        for (std::size_t j = top; j < m; ++j) {
            const std::size_t b = j - top;
            if (b < split.late.size()) CHECK(out[j] == split.late[b].task);
            else CHECK_FALSE(out[j].has_value());
        }
    }
}

TEST_CASE("dispatch state parsing")
{
    std::istringstream in("# task deadline remaining last\n0 10 2 1\n1 5/2 0.5 -\n\n2 7 1\n");
    const auto st = parse_dispatch_state(in);
    REQUIRE(st.size() == 3);
    CHECK(st[0].last_node == std::optional<std::size_t>(1));
    CHECK(st[1].abs_deadline == Rat(5, 2));
    CHECK(st[1].remaining == Rat(1, 2));
    CHECK_FALSE(st[1].last_node.has_value());
    std::istringstream bad("0 10\n");
    CHECK_THROWS_AS(parse_dispatch_state(bad), ModelError);
    std::istringstream zero("0 10 0\n");
    CHECK_THROWS_AS(parse_dispatch_state(zero), ModelError);
}
