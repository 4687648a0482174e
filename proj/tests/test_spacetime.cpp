#include "doctest.h"
#include "pht/spacetime.hpp"

#include <cmath>
#include <random>
#include <set>

#include "support.hpp"

using namespace pht;
using namespace pht::spacetime;
using support::kPi;

namespace {

SampleGrid hex_grid7() {
    auto hex = geom::generate_net(6, 2, geom::SphereMetric::geodesic);
    std::vector<double> t;
    for (int k = 0; k <= 6; ++k) t.push_back(-kPi + k * kPi / 6.0);
    return SampleGrid(hex, t, geom::Coords::theta);
}

SpaceTimePoint pt(const SampleGrid& g, int dir, int par) {
    return SpaceTimePoint{g.directions[dir], g.params[par], dir};
}

std::set<std::pair<int, int>> member_set(const LightCone& c) {
    std::set<std::pair<int, int>> s;
    for (const auto& m : c.members) s.insert({m.dir, m.par});
    return s;
}

bool closure_equals_relation(const LightCone& c, const SampleGrid& g) {
    const int n = static_cast<int>(c.members.size());
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) reach[i][i] = 1;
    for (const auto& e : c.generators) reach[e.src][e.dst] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            if (!reach[i][k]) continue;
            for (int j = 0; j < n; ++j)
                if (reach[k][j]) reach[i][j] = 1;
        }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            bool rel = support::members_leq(c, g, a, b);
            if (rel != (reach[a][b] != 0)) return false;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE_BEGIN("spacetime");

TEST_CASE("pre-order predicate") {
    auto g = hex_grid7();
    auto w = geom::Direction::from_angle(kPi / 2.0);
    // d_g(v1, v2) = pi/3 for adjacent hexagon directions.
    CHECK(leq(pt(g, 2, 2), pt(g, 1, 4), g.metric(), g.sup_param()));     // rises by pi/3
    CHECK(leq(pt(g, 1, 4), pt(g, 1, 4), g.metric(), g.sup_param()));     // reflexive
    CHECK_FALSE(leq(pt(g, 1, 4), pt(g, 2, 4), g.metric(), g.sup_param()));
    // Formal morphisms into the top slice.
    CHECK(leq(pt(g, 0, 0), pt(g, 3, 6), g.metric(), g.sup_param()));
    CHECK(leq({w, -0.2, -1}, pt(g, 4, 6), g.metric(), g.sup_param()));
}

TEST_CASE("pre-order is reflexive and transitive, and the top slice is one class") {
    auto g = hex_grid7();
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dir(0, g.dir_count() - 1);
    std::uniform_int_distribution<int> par(0, g.param_count() - 1);
    for (int i = 0; i < 10000; ++i) {
        auto a = pt(g, dir(rng), par(rng));
        auto b = pt(g, dir(rng), par(rng));
        auto c = pt(g, dir(rng), par(rng));
        CHECK(leq(a, a, g.metric(), g.sup_param()));
        if (leq(a, b, g.metric(), g.sup_param()) && leq(b, c, g.metric(), g.sup_param()))
            CHECK(leq(a, c, g.metric(), g.sup_param()));
    }
    for (int i = 0; i < g.dir_count(); ++i)
        for (int j = 0; j < g.dir_count(); ++j) {
            CHECK(leq(pt(g, i, 6), pt(g, j, 6), g.metric(), g.sup_param()));
        }
}

TEST_CASE("past light cones on the hexagon fixture") {
    auto g = hex_grid7();
    auto w = geom::Direction::from_angle(kPi / 2.0);

    auto cone = past_light_cone({w, -kPi / 6.0, -1}, g);
    // Maximal members are (v1, -pi/3) and (v2, -pi/3).
    std::set<std::pair<int, int>> maximal;
    for (int a = 0; a < static_cast<int>(cone.members.size()); ++a) {
        bool is_max = true;
        for (int b = 0; b < static_cast<int>(cone.members.size()); ++b) {
            if (a == b) continue;
            if (support::members_leq(cone, g, a, b) && !support::members_leq(cone, g, b, a))
                is_max = false;
        }
        if (is_max) maximal.insert({cone.members[a].dir, cone.members[a].par});
    }
    CHECK(maximal == std::set<std::pair<int, int>>{{1, 4}, {2, 4}});
    CHECK(is_connected(cone));

    auto low = past_light_cone({w, -2.0 * kPi / 3.0, -1}, g);
    CHECK(member_set(low) == std::set<std::pair<int, int>>{{1, 0}, {1, 1}, {2, 0}, {2, 1}});
    CHECK_FALSE(is_connected(low));

    // Below every direction's reach the cone is empty.
    auto nothing = past_light_cone({w, -kPi + 0.01, -1}, g);
    CHECK(nothing.empty());
    CHECK(is_connected(nothing));
}

TEST_CASE("future light cones always hold the top slice") {
    auto g = hex_grid7();
    auto w = geom::Direction::from_angle(kPi / 2.0);
    for (double beta : {-kPi, -2.0, -kPi / 6.0, -0.01, 0.0}) {
        auto cone = future_light_cone({w, beta, -1}, g);
        for (int i = 0; i < g.dir_count(); ++i)
            CHECK(member_set(cone).count({i, g.param_count() - 1}) == 1);
    }
    // At beta = -pi/6 the strict members are exactly (v1, 0) and (v2, 0).
    auto cone = future_light_cone({w, -kPi / 6.0, -1}, g);
    std::set<std::pair<int, int>> strict;
    for (const auto& m : cone.members)
        if (m.strict) strict.insert({m.dir, m.par});
    CHECK(strict == std::set<std::pair<int, int>>{{1, 6}, {2, 6}});
    // At the top parameter the cone is exactly the top slice.
    auto top = future_light_cone({w, 0.0, -1}, g);
    CHECK(top.members.size() == 6);
    for (const auto& m : top.members) CHECK(m.par == g.param_count() - 1);
}

TEST_CASE("cone monotonicity") {
    auto g = hex_grid7();
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> beta(-kPi, 0.0);
    for (int i = 0; i < 100; ++i) {
        auto w = geom::Direction::from_angle(angle(rng));
        double b1 = beta(rng), b2 = beta(rng);
        if (b1 > b2) std::swap(b1, b2);
        auto p1 = member_set(past_light_cone({w, b1, -1}, g));
        auto p2 = member_set(past_light_cone({w, b2, -1}, g));
        for (const auto& m : p1) CHECK(p2.count(m) == 1);
        auto f1 = member_set(future_light_cone({w, b1, -1}, g));
        auto f2 = member_set(future_light_cone({w, b2, -1}, g));
        for (const auto& m : f2) CHECK(f1.count(m) == 1);
    }
}

TEST_CASE("generator closure equals the member relation") {
    auto g = hex_grid7();
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> beta(-kPi, 0.0);
    for (int i = 0; i < 60; ++i) {
        auto w = geom::Direction::from_angle(angle(rng));
        double b = beta(rng);
        CHECK(closure_equals_relation(past_light_cone({w, b, -1}, g), g));
        CHECK(closure_equals_relation(future_light_cone({w, b, -1}, g), g));
    }
    // Top-parameter queries exercise the formal cycle.
    auto w = geom::Direction::from_angle(0.123);
    CHECK(closure_equals_relation(past_light_cone({w, 0.0, -1}, g), g));
    CHECK(closure_equals_relation(future_light_cone({w, 0.0, -1}, g), g));
}

TEST_CASE("cofinal reduction") {
    auto g = hex_grid7();
    auto w = geom::Direction::from_angle(kPi / 2.0);

    auto cone = past_light_cone({w, -kPi / 6.0, -1}, g);
    auto red = cofinal_reduction(cone);
    CHECK(member_set(red) ==
          std::set<std::pair<int, int>>{{1, 2}, {1, 4}, {2, 2}, {2, 4}});
    CHECK(red.generators.size() == 4);

    // A single chain reduces to its maximum.
    auto single = geom::DirectionSet({geom::Direction::from_angle(0.0)},
                                     geom::SphereMetric::geodesic);
    SampleGrid g1(single, {-kPi, -kPi / 2.0, 0.0}, geom::Coords::theta);
    auto chain = past_light_cone({geom::Direction::from_angle(0.0), -0.4, -1}, g1);
    CHECK(chain.members.size() > 1);
    auto chain_red = cofinal_reduction(chain);
    CHECK(chain_red.members.size() == 1);

    // The disconnected fixture keeps its two maxima.
    auto low = past_light_cone({w, -2.0 * kPi / 3.0, -1}, g);
    auto low_red = cofinal_reduction(low);
    CHECK(member_set(low_red) == std::set<std::pair<int, int>>{{1, 1}, {2, 1}});
}

TEST_CASE("grid resolution quantities") {
    auto g = hex_grid7();
    CHECK(g.epsilon_directions() == doctest::Approx(kPi / 6.0));
    CHECK(g.epsilon_params() == doctest::Approx(kPi / 6.0));
    CHECK(g.sup_param() == 0.0);
    CHECK(g.params.back() == 0.0);

    // sup X joins the grid even when omitted.
    auto hex = geom::generate_net(6, 2, geom::SphereMetric::geodesic);
    SampleGrid partial(hex, {-1.0, -2.0}, geom::Coords::theta);
    CHECK(partial.params.back() == 0.0);
    CHECK(partial.param_count() == 3);

    CHECK_THROWS(SampleGrid(geom::generate_net(4, 2, geom::SphereMetric::euclidean), {-1.0, 0.0},
                            geom::Coords::theta));
}

TEST_SUITE_END();
