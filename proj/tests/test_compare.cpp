#include <doctest.h>

#include <cmath>
#include <vector>

#include "threebody/compare.hpp"
#include "threebody/errors.hpp"

using namespace threebody;

namespace {

// Straight-line body tracks with consistent velocities, easy to reason about.
Trajectory linear_trajectory(double t0, double t1, int samples, Vec2 offset,
                             const char* mode = "synthetic") {
    Trajectory traj;
    traj.kind = TrajectoryKind::body_states;
    traj.mode = mode;
    for (int b = 0; b < 3; ++b) {
        BodyTrack track;
        track.horizon = t1;
        for (int s = 0; s < samples; ++s) {
            double t = t0 + (t1 - t0) * s / (samples - 1);
            Vec2 pos{1.0 + b + 0.5 * t + offset.x, 2.0 * b - 0.25 * t + offset.y + 3.0};
            Vec2 vel{0.5, -0.25};
            track.times.push_back(t);
            track.states.push_back(cartesian_to_polar(pos, vel));
        }
        traj.tracks[b] = std::move(track);
    }
    return traj;
}

}  // namespace

TEST_SUITE("compare") {

TEST_CASE("a trajectory compared with itself has zero error") {
    Trajectory traj = linear_trajectory(0.0, 4.0, 21, {0.0, 0.0});
    ErrorMetrics m = compare(traj, traj, 0.5);
    for (int b = 0; b < 3; ++b) {
        REQUIRE(m.body[b].has_value());
        CHECK(m.body[b]->rms_position_error == 0.0);
        CHECK(m.body[b]->max_position_error == 0.0);
        CHECK(m.body[b]->final_error == 0.0);
        CHECK(!m.body[b]->divergence_time.has_value());
    }
    CHECK(m.samples_compared == 63);
    CHECK(m.horizon_start == 0.0);
    CHECK(m.horizon_end == 4.0);
}

TEST_CASE("a constant offset appears as a uniform error") {
    Trajectory a = linear_trajectory(0.0, 4.0, 21, {0.3, 0.0});
    Trajectory b = linear_trajectory(0.0, 4.0, 21, {0.0, 0.0});
    ErrorMetrics m = compare(a, b, 0.5);
    for (int i = 0; i < 3; ++i) {
        CHECK(m.body[i]->rms_position_error == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(m.body[i]->max_position_error == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(m.body[i]->rms_position_error <= m.body[i]->max_position_error);
        CHECK(!m.body[i]->divergence_time.has_value());  // 0.3 < threshold
    }
    ErrorMetrics tight = compare(a, b, 0.1);
    for (int i = 0; i < 3; ++i) {
        REQUIRE(tight.body[i]->divergence_time.has_value());
        CHECK(*tight.body[i]->divergence_time == 0.0);
    }
}

TEST_CASE("swapping the arguments keeps the error magnitudes") {
    Trajectory a = linear_trajectory(0.0, 4.0, 21, {0.2, -0.1});
    Trajectory b = linear_trajectory(0.0, 4.0, 41, {0.0, 0.0});  // denser reference
    ErrorMetrics ab = compare(a, b, 1.0);
    ErrorMetrics ba = compare(b, a, 1.0);
    for (int i = 0; i < 3; ++i) {
        CHECK(ab.body[i]->max_position_error ==
              doctest::Approx(ba.body[i]->max_position_error).epsilon(1e-9));
        CHECK(ab.body[i]->rms_position_error ==
              doctest::Approx(ba.body[i]->rms_position_error).epsilon(1e-9));
    }
}

TEST_CASE("reference interpolation is exact for cubic-consistent motion") {
    // The reference carries velocities, so Hermite interpolation reproduces
    // straight-line motion exactly at off-grid times.
    Trajectory a = linear_trajectory(0.0, 4.0, 41, {0.0, 0.0});
    Trajectory b = linear_trajectory(0.0, 4.0, 11, {0.0, 0.0});
    ErrorMetrics m = compare(a, b, 0.5);
    for (int i = 0; i < 3; ++i)
        CHECK(m.body[i]->max_position_error <= 1e-12);
}

TEST_CASE("divergence time scans in order") {
    std::vector<double> times{0.0, 1.0, 2.0, 3.0};
    std::vector<double> errors{0.0, 0.1, 0.4, 0.2};
    CHECK(!divergence_time(times, errors, 0.5).has_value());
    CHECK(*divergence_time(times, errors, 0.3) == 2.0);
    CHECK(*divergence_time(times, errors, 0.0) == 1.0);  // first nonzero error
}

TEST_CASE("disjoint intervals and kind mismatches are errors") {
    Trajectory a = linear_trajectory(0.0, 1.0, 5, {0.0, 0.0});
    Trajectory b = linear_trajectory(2.0, 3.0, 5, {0.0, 0.0});
    CHECK_THROWS_AS(compare(a, b, 1.0), DisjointIntervals);

    Trajectory c = linear_trajectory(0.0, 1.0, 5, {0.0, 0.0});
    c.kind = TrajectoryKind::surrogate_separation;
    CHECK_THROWS_AS(compare(a, c, 1.0), DisjointIntervals);
}

TEST_CASE("partial overlap clips to the common interval") {
    Trajectory a = linear_trajectory(0.0, 4.0, 41, {0.0, 0.0});
    Trajectory b = linear_trajectory(2.0, 6.0, 41, {0.0, 0.0});
    ErrorMetrics m = compare(a, b, 1.0);
    CHECK(m.horizon_start >= 2.0);
    CHECK(m.horizon_end <= 4.0);
    CHECK(m.samples_compared > 0);
}

}  // TEST_SUITE
