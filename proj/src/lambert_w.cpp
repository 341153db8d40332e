#include "threebody/lambert_w.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "threebody/errors.hpp"

namespace threebody {

namespace {

const double kInvE = std::exp(-1.0);

// Series about the branch point z = -1/e in p = +-sqrt(2(1 + e z)):
// w = -1 + p - p^2/3 + ...  The sign of p selects the branch.
double branch_point_guess(double z, bool lower) {
    double u = 2.0 * (1.0 + std::exp(1.0) * z);
    if (u <= 0.0) return -1.0;
    double p = std::sqrt(u);
    if (lower) p = -p;
    return -1.0 + p - p * p / 3.0;
}

// Halley iteration on f(w) = w e^w - z. Terminates when the step drops
// below 1e-15*(1+|w|) or the residual reaches rounding-noise level; 50
// iterations without convergence is IterationError.
double halley(double z, double w, bool lower) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int iter = 0; iter < 50; ++iter) {
        double ew = std::exp(w);
        double f = w * ew - z;
        if (std::fabs(f) <= 4.0 * eps * (std::fabs(w * ew) + std::fabs(z))) return w;
        double fp = ew * (w + 1.0);
        double fpp = ew * (w + 2.0);
        double denom = fp - 0.5 * f * fpp / fp;
        double step = f / denom;
        if (!std::isfinite(step)) step = f / fp;
        double next = w - step;
        // Keep iterates on the branch; each branch is monotone on its side
        // of w = -1, so a crossing is always an overshoot.
        if (lower && next > -1.0) next = 0.5 * (w - 1.0);
        if (!lower && next < -1.0) next = 0.5 * (w - 1.0);
        if (next == prev) return next;  // two-cycle at the last ulp
        prev = w;
        double moved = std::fabs(next - w);
        w = next;
        if (moved <= 1e-15 * (1.0 + std::fabs(w))) return w;
    }
    throw IterationError("lambert w: Halley iteration did not converge for z = " +
                         std::to_string(z));
}

}  // namespace

double w0(double z) {
    if (z < -kInvE - kBranchPointSlack)
        throw DomainError("w0: argument below branch point -1/e");
    if (z <= -kInvE) return -1.0;
    if (z == 0.0) return 0.0;

    double w;
    if (std::fabs(z + kInvE) <= 1e-2) {
        w = branch_point_guess(z, false);
    } else if (z > 3.0) {
        double lz = std::log(z);
        w = lz - std::log(lz);
    } else if (z > 0.5) {
        w = std::log(1.0 + z);
    } else {
        w = z;  // W_0(z) ~ z near zero
    }
    return halley(z, w, false);
}

double wm1(double z) {
    if (z >= 0.0)
        throw DomainError("wm1: argument must be negative");
    if (z < -kInvE - kBranchPointSlack)
        throw DomainError("wm1: argument below branch point -1/e");
    if (z <= -kInvE) return -1.0;

    if (z > -1e-290) {
        // |z| so small that w e^w is subnormal and Halley loses all
        // precision. Newton on the log form ln(-w) + w = ln(-z) instead;
        // no exponentials, quadratic convergence.
        double target = std::log(-z);
        double l2 = std::log(-target);
        double w = target - l2 + l2 / target;
        for (int iter = 0; iter < 50; ++iter) {
            double g = std::log(-w) + w - target;
            double step = g / (1.0 + 1.0 / w);
            w -= step;
            if (std::fabs(step) <= 1e-15 * std::fabs(w)) return w;
        }
        throw IterationError("wm1: log-form Newton did not converge");
    }

    double w;
    if (std::fabs(z + kInvE) <= 1e-2) {
        w = branch_point_guess(z, true);
    } else {
        double l1 = std::log(-z);
        double l2 = std::log(-l1);
        w = l1 - l2 + l2 / l1;
        if (w > -1.0) w = -1.0 - 1e-9;
    }
    return halley(z, w, true);
}

double lambert_w(Branch branch, double z) {
    return branch == Branch::principal ? w0(z) : wm1(z);
}

double w_residual(double w, double z) {
    return w * std::exp(w) - z;
}

const char* branch_name(Branch branch) {
    return branch == Branch::principal ? "principal" : "lower";
}

}  // namespace threebody
