#include "fixtures.hpp"

#include "weedplan/bench.hpp"
#include "weedplan/errors.hpp"
#include "weedplan/kinematics.hpp"
#include "weedplan/planner.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace weedplan;
using weedplan::testing::weed_at;

namespace {

const Kinematics kKin{0.5, 5.0};

std::vector<TargetNode> nodes_from(std::initializer_list<std::pair<double, double>> xy) {
    std::vector<TargetNode> out;
    int id = 0;
    for (auto [x, y] : xy) {
        out.push_back({id, id, x, y});
        ++id;
    }
    return out;
}

// Independent check of a plan: walk the visited chain and re-evaluate every
// move with the raw inequality.
bool chain_is_executable(const Trajectory &t, std::span<const TargetNode> nodes, HeadStart start, Kinematics kin) {
    double x = start.toolline_x;
    double y = start.y;
    for (int id : t.visited_nodes()) {
        const auto &n = *std::find_if(nodes.begin(), nodes.end(), [&](const TargetNode &m) { return m.node_id == id; });
        const double dx = n.x - x;
        const double dy = std::abs(n.y - y);
        if (!(dx > 0.0) || !(kin.robot_speed * dy < kin.axis_speed * dx)) {
            return false;
        }
        x = n.x;
        y = n.y;
    }
    return true;
}

} // namespace

TEST_CASE("movement cost includes the approach move") {
    const std::vector<double> ys = {0.2, 0.5, 0.1};
    CHECK(movement_cost(ys, 0.0) == doctest::Approx(0.29));
    CHECK(movement_cost({}, 0.7) == 0.0);
}

TEST_CASE("trajectory selection order") {
    Trajectory a;
    a.visit_order = {0, 1, 2};
    a.visited_count = 3;
    a.movement_cost = 0.29;
    Trajectory b = a;
    b.visited_count = 2;
    b.movement_cost = 0.01;
    std::vector<Trajectory> c = {b, a};
    CHECK(&select_trajectory(c) == &c[1]);

    b.visited_count = 3;
    b.movement_cost = 0.10;
    c = {a, b};
    CHECK(select_trajectory(c).movement_cost == 0.10);

    b = a;
    b.visit_order = {0, 2, 1};
    c = {b, a};
    CHECK(select_trajectory(c).visit_order == std::vector<int>{0, 1, 2});

    CHECK_THROWS_AS(select_trajectory({}), std::invalid_argument);
}

TEST_CASE("pruning") {
    HeadStart start{0.4, 0.0};
    auto line = nodes_from({{0.5, 0.4}, {0.6, 0.4}, {0.9, 0.4}});
    auto r = prune_infeasible(line, start, kKin);
    CHECK(r.visited_count == 3);

    auto backwards = nodes_from({{0.9, 0.4}, {0.5, 0.4}});
    r = prune_infeasible(backwards, start, kKin);
    CHECK(r.feasible_mask == std::vector<bool>{true, false});

    auto same_x = nodes_from({{0.5, 0.4}, {0.5, 0.8}});
    r = prune_infeasible(same_x, start, kKin);
    CHECK(r.feasible_mask == std::vector<bool>{true, false});
    CHECK(r.visited_count == 1);

    // A rejected node does not move the head.
    auto skip = nodes_from({{0.05, 1.3}, {0.1, 0.45}});
    r = prune_infeasible(skip, start, kKin);
    CHECK(r.feasible_mask == std::vector<bool>{false, true});
}

TEST_CASE("brute force trivial cases") {
    HeadStart start{0.1, 0.0};
    auto one = nodes_from({{1.0, 0.5}});
    auto t = plan_brute_force(one, start, kKin);
    CHECK(t.visit_order == std::vector<int>{0});
    CHECK(t.visited_count == 1);
    CHECK(t.movement_cost == doctest::Approx(0.16));
    CHECK(t.planner == PlannerKind::brute_force);

    t = plan_brute_force({}, start, kKin);
    CHECK(t.visit_order.empty());
    CHECK(t.visited_count == 0);
    CHECK(t.movement_cost == 0.0);
}

TEST_CASE("three-node instance visits all nodes") {
    HeadStart start{0.2, 0.0};
    auto nodes = nodes_from({{1.0, 0.2}, {1.2, 1.1}, {1.4, 0.25}});
    const auto dp = plan_notsp(nodes, start, kKin);
    const auto bf = plan_brute_force(nodes, start, kKin);
    CHECK(bf.visited_count == 3);
    CHECK(bf.movement_cost == doctest::Approx(0.81 + 0.7225));
    CHECK(dp.visited_count == bf.visited_count);
    CHECK(dp.movement_cost == doctest::Approx(bf.movement_cost));
    CHECK(dp.visit_order == std::vector<int>{0, 1, 2});
    CHECK(dp.planner == PlannerKind::notsp);
}

TEST_CASE("single unreachable node") {
    HeadStart start{0.0, 0.0};
    auto nodes = nodes_from({{0.001, 1.3}});
    CHECK(plan_notsp(nodes, start, kKin).visited_count == 0);
    CHECK(plan_brute_force(nodes, start, kKin).visited_count == 0);
    CHECK(plan_notsp(nodes, start, kKin).movement_cost == 0.0);
}

TEST_CASE("size caps") {
    std::vector<TargetNode> eleven = random_instance(11, 1);
    CHECK_THROWS_AS(plan_brute_force(eleven, {0.65, 0.0}, kKin), SizeError);
    try {
        plan_brute_force(eleven, {0.65, 0.0}, kKin);
    } catch (const SizeError &e) {
        CHECK(std::string(e.what()).find("notsp") != std::string::npos);
    }
    std::vector<TargetNode> many = random_instance(25, 1);
    CHECK_THROWS_AS(plan_notsp(many, {0.65, 0.0}, kKin), SizeError);
    CHECK_THROWS_AS(plan_notsp(eleven, {0.65, 0.0}, kKin, 8), SizeError);
    CHECK_NOTHROW(plan_notsp(random_instance(16, 1), {0.65, 0.0}, kKin));
}

TEST_CASE("notsp matches brute force on random instances") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> start_y(0.0, 1.3);
    for (std::uint64_t i = 0; i < 300; ++i) {
        const auto n = static_cast<std::size_t>(rng() % 8) + 1;
        auto nodes = random_instance(n, rng());
        const HeadStart start{start_y(rng), 0.0};
        const auto dp = plan_notsp(nodes, start, kKin);
        const auto bf = plan_brute_force(nodes, start, kKin);
        REQUIRE(dp.visited_count == bf.visited_count);
        CHECK(dp.movement_cost == doctest::Approx(bf.movement_cost).epsilon(1e-9));
        CHECK(chain_is_executable(dp, nodes, start, kKin));
        CHECK(chain_is_executable(bf, nodes, start, kKin));

        auto order = dp.visit_order;
        std::sort(order.begin(), order.end());
        std::vector<int> ids;
        for (const auto &nd : nodes) {
            ids.push_back(nd.node_id);
        }
        std::sort(ids.begin(), ids.end());
        CHECK(order == ids);
        CHECK(dp.visited_count == std::count(dp.feasible_mask.begin(), dp.feasible_mask.end(), true));
    }
}

TEST_CASE("adding a node never reduces the visit count") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 200; ++i) {
        const auto n = static_cast<std::size_t>(rng() % 12) + 1;
        auto nodes = random_instance(n + 1, rng());
        const HeadStart start{0.65, 0.0};
        const auto full = plan_notsp(nodes, start, kKin);
        nodes.pop_back();
        const auto fewer = plan_notsp(nodes, start, kKin);
        CHECK(full.visited_count >= fewer.visited_count);
    }
}

TEST_CASE("plan line format") {
    const std::vector<PlantInstance> weeds = {weed_at(40, 1.0, 0.2), weed_at(41, 1.01, 1.2), weed_at(42, 1.4, 0.25)};
    const auto g = build_graph(weeds, kKin);
    auto t = plan_notsp(g.nodes(), {0.2, 0.0}, kKin);
    std::ostringstream out;
    t.head_index = 0;
    write_plan_line(out, t, g);
    CHECK(out.str() == "head=0 visits=2 cost=0.0024999999999999988 order=[40,42,41] mask=[1,1,0]\n");
}
