#include <doctest.h>

#include <vector>

#include "fixtures.hpp"
#include "lego/temporal.hpp"

using namespace lego;

namespace {

std::vector<DayAssignment> blocks(const std::vector<int>& rp_of_day) {
    std::vector<DayAssignment> out;
    for (std::size_t d = 0; d < rp_of_day.size(); ++d) out.push_back({static_cast<int>(d) + 1, rp_of_day[d]});
    return out;
}

}  // namespace

TEST_CASE("hourly identity maps periods onto steps") {
    auto t = TemporalStructure::hourly_identity(5);
    CHECK(t.n_periods() == 5);
    CHECK(t.n_rep_periods() == 1);
    CHECK(t.gamma(3) == StepRef{1, 3});
    CHECK(t.rp_weight(1) == 1.0);
    CHECK(t.represented_hours() == 5.0);
    CHECK(t.is_chronological());
}

TEST_CASE("representative days carry day counts as weights") {
    auto t = TemporalStructure::representative(blocks({1, 2, 1, 1}), 2, 3);
    CHECK(t.n_periods() == 12);
    CHECK(t.rp_weight(1) == 3.0);
    CHECK(t.rp_weight(2) == 1.0);
    CHECK(t.gamma(4) == StepRef{2, 1});
    CHECK(t.gamma(12) == StepRef{1, 3});
    CHECK(t.represented_hours() == 12.0);
    CHECK(t.steps().size() == 6);
}

TEST_CASE("cyclic neighbours wrap inside a representative period") {
    auto t = TemporalStructure::representative(blocks({1, 2}), 2, 4);
    CHECK(t.prev_cyclic({1, 1}) == StepRef{1, 4});
    CHECK(t.next_cyclic({2, 4}) == StepRef{2, 1});
}

TEST_CASE("moving window checkpoints and members") {
    auto t = TemporalStructure::representative(blocks({1, 2, 1}), 2, 2).with_moving_window(2);
    CHECK(t.checkpoints() == std::vector<int>{2, 4, 6});
    auto w = t.window_members(4);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == StepRef{2, 1});
    CHECK(w[1] == StepRef{2, 2});
    CHECK_THROWS_AS(t.window_members(3), TemporalError);
    CHECK_THROWS_AS(t.with_moving_window(5), TemporalError);
}

TEST_CASE("bad assignments are rejected") {
    CHECK_THROWS_AS(TemporalStructure::representative({{1, 1}, {1, 1}}, 1, 2), TemporalError);
    CHECK_THROWS_AS(TemporalStructure::representative({{1, 1}, {3, 1}}, 1, 2), TemporalError);
    CHECK_THROWS_AS(TemporalStructure::representative({{1, 3}}, 2, 2), TemporalError);
}

TEST_CASE("ninebus calendar covers a year") {
    auto t = load_temporal(lego::testing::data_dir() / "ninebus", 7, 24, 24);
    CHECK(t.n_periods() == 365 * 24);
    CHECK(t.represented_hours() == doctest::Approx(8760.0));
    CHECK(t.moving_window() == 24);
}
