#include "threebody/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "threebody/errors.hpp"

namespace threebody {

namespace {

Vec2 hermite_position(double t, double t0, double t1, const CartesianState& s0,
                      const CartesianState& s1) {
    double h = t1 - t0;
    double th = (t - t0) / h;
    double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
    double h10 = th * (1.0 - th) * (1.0 - th);
    double h01 = th * th * (3.0 - 2.0 * th);
    double h11 = th * th * (th - 1.0);
    return s0.position * h00 + s0.velocity * (h10 * h) + s1.position * h01 +
           s1.velocity * (h11 * h);
}

// Reference position at time t by cubic Hermite interpolation between the
// bracketing samples of `track`.
Vec2 reference_position(const BodyTrack& track, double t) {
    const auto& ts = track.times;
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    if (hi < ts.size() && ts[hi] == t)
        return polar_to_cartesian(track.states[hi]).position;
    std::size_t lo = hi - 1;  // caller guarantees t inside [front, back]
    CartesianState s0 = polar_to_cartesian(track.states[lo]);
    CartesianState s1 = polar_to_cartesian(track.states[hi]);
    return hermite_position(t, ts[lo], ts[hi], s0, s1);
}

}  // namespace

std::optional<double> divergence_time(std::span<const double> times,
                                      std::span<const double> errors, double threshold) {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (errors[i] > threshold) return times[i];
    return std::nullopt;
}

ErrorMetrics compare(const Trajectory& a, const Trajectory& b, double threshold) {
    if (a.kind != b.kind)
        throw DisjointIntervals("compare: trajectories describe different coordinates (" +
                                std::string(trajectory_kind_name(a.kind)) + " vs " +
                                trajectory_kind_name(b.kind) + ")");

    ErrorMetrics metrics;
    metrics.threshold = threshold;
    double start = -std::numeric_limits<double>::infinity();
    double end = std::numeric_limits<double>::infinity();
    bool any = false;

    for (int i = 0; i < 3; ++i) {
        if (!a.tracks[i] || !b.tracks[i]) continue;
        const BodyTrack& ta = *a.tracks[i];
        const BodyTrack& tb = *b.tracks[i];
        if (ta.times.empty() || tb.times.empty()) continue;

        double lo = std::max(ta.times.front(), tb.times.front());
        double hi = std::min(ta.times.back(), tb.times.back());
        if (lo > hi)
            throw DisjointIntervals("compare: body " + std::to_string(i + 1) +
                                    " tracks share no time interval");

        std::vector<double> times, errors;
        for (std::size_t s = 0; s < ta.times.size(); ++s) {
            double t = ta.times[s];
            if (t < lo || t > hi) continue;
            Vec2 pa = polar_to_cartesian(ta.states[s]).position;
            Vec2 pb = reference_position(tb, t);
            times.push_back(t);
            errors.push_back((pa - pb).norm());
        }
        if (times.empty()) continue;

        BodyMetrics bm;
        double sum_sq = 0.0;
        for (double e : errors) {
            sum_sq += e * e;
            bm.max_position_error = std::max(bm.max_position_error, e);
        }
        bm.rms_position_error = std::sqrt(sum_sq / static_cast<double>(errors.size()));
        bm.final_error = errors.back();
        bm.divergence_time = divergence_time(times, errors, threshold);
        metrics.body[i] = bm;
        metrics.samples_compared += static_cast<long>(times.size());
        start = std::max(start, times.front());
        end = std::min(end, times.back());
        any = true;
    }

    if (!any)
        throw DisjointIntervals("compare: no comparable body tracks");
    metrics.horizon_start = start;
    metrics.horizon_end = end;
    return metrics;
}

}  // namespace threebody
