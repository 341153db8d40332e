#include "threebody/rk.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "threebody/errors.hpp"

namespace threebody {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Difference between the 5th-order weights and the embedded 4th-order ones.
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                 e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                 e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

OdeResult integrate_ode(const OdeRhs& rhs, std::span<const double> y0,
                        double t0, double t_end,
                        std::span<const double> sample_times,
                        const OdeOptions& options) {
    if (!(t_end > t0))
        throw StepFailure("integrate_ode: t_end must exceed t0");
    if (!(options.rel_tol > 0.0) || !(options.abs_tol > 0.0))
        throw StepFailure("integrate_ode: tolerances must be positive");

    const std::size_t n = y0.size();
    const double span_t = t_end - t0;
    const double h_min = std::max(1e-14 * span_t, 16.0 * std::numeric_limits<double>::epsilon() *
                                                      std::max(std::fabs(t0), std::fabs(t_end)));

    OdeResult out;
    out.stats.rel_tol = options.rel_tol;
    out.stats.abs_tol = options.abs_tol;
    out.times.reserve(sample_times.size());
    out.states.reserve(sample_times.size());

    std::vector<double> y(y0.begin(), y0.end());
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ytmp(n), ynew(n), yerr(n);

    rhs(t0, y, k1);

    auto scale_of = [&](std::size_t i) {
        return options.abs_tol +
               options.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
    };

    // Initial step from the ratio of state and derivative norms.
    double h;
    {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double sc = options.abs_tol + options.rel_tol * std::fabs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        h = (d1 > 0.0 && d0 > 0.0) ? 0.01 * std::sqrt(d0 / d1) : 1e-6 * span_t;
        h = std::clamp(h, h_min, span_t);
    }

    std::size_t sample_idx = 0;
    // Leading samples at exactly t0.
    while (sample_idx < sample_times.size() && sample_times[sample_idx] <= t0) {
        out.times.push_back(sample_times[sample_idx]);
        out.states.push_back(y);
        ++sample_idx;
    }

    double t = t0;
    double err_prev = 1.0;
    bool just_rejected = false;
    long attempts = 0;

    while (t < t_end) {
        if (++attempts > options.max_steps)
            throw MaxStepsExceeded("integrate_ode: exceeded " +
                                   std::to_string(options.max_steps) + " step attempts");
        if (h < h_min)
            throw StepFailure("integrate_ode: step size underflow at t = " + std::to_string(t));
        if (t + h > t_end) h = t_end - t;

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                  b6 * k6[i]);
        rhs(t + h, ynew, k7);  // FSAL

        double err = 0.0;
        double herr = 0.0;
        if (!all_finite(ynew) || !all_finite(k7)) {
            err = 1e10;
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                               e6 * k6[i] + e7 * k7[i]);
                double sc = scale_of(i);
                err += (yerr[i] / sc) * (yerr[i] / sc);

                // Cubic Hermite interpolation error ~ h^4 |y''''| / 384, with
                // y'''' estimated from the second divided difference of the
                // derivative samples at theta = 0, 3/10, 1.
                double f01 = (k3[i] - k1[i]) / (c3 * h);
                double f12 = (k7[i] - k3[i]) / ((1.0 - c3) * h);
                double y4 = 2.0 * (f12 - f01) / h;
                double he = h * h * h * h * std::fabs(y4) / 384.0;
                double hs = he / (0.1 * sc);
                herr += hs * hs;
            }
            err = std::sqrt(err / static_cast<double>(n));
            herr = std::sqrt(herr / static_cast<double>(n));
        }

        if (err <= 1.0 && herr <= 1.0) {
            // Emit samples covered by this step via cubic Hermite.
            while (sample_idx < sample_times.size() && sample_times[sample_idx] <= t + h) {
                double ts = sample_times[sample_idx];
                double th = std::clamp((ts - t) / h, 0.0, 1.0);
                double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
                double h10 = th * (1.0 - th) * (1.0 - th);
                double h01 = th * th * (3.0 - 2.0 * th);
                double h11 = th * th * (th - 1.0);
                std::vector<double> ys(n);
                for (std::size_t i = 0; i < n; ++i)
                    ys[i] = h00 * y[i] + h10 * h * k1[i] + h01 * ynew[i] + h11 * h * k7[i];
                out.times.push_back(ts);
                out.states.push_back(std::move(ys));
                ++sample_idx;
            }

            t += h;
            y.swap(ynew);
            k1.swap(k7);
            ++out.stats.steps;

            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                         std::pow(err_prev, 0.4 / 5.0);
            double fac_interp = 0.9 * std::pow(std::max(herr, 1e-10), -0.25);
            fac = std::min(fac, fac_interp);
            fac = std::clamp(fac, 0.2, just_rejected ? 1.0 : 5.0);
            err_prev = std::max(err, 1e-10);
            just_rejected = false;
            h *= fac;
        } else {
            ++out.stats.rejected_steps;
            just_rejected = true;
            double fac_err = 0.9 * std::pow(std::max(err, 1e-10), -1.0 / 5.0);
            double fac_interp = 0.9 * std::pow(std::max(herr, 1e-10), -0.25);
            h *= std::clamp(std::min(fac_err, fac_interp), 0.1, 1.0);
        }
    }

    // Trailing samples at exactly t_end (rounding may leave them past t).
    while (sample_idx < sample_times.size()) {
        out.times.push_back(sample_times[sample_idx]);
        out.states.push_back(y);
        ++sample_idx;
    }
    return out;
}

}  // namespace threebody
