#pragma once

namespace threebody {

// The two real branches of the Lambert W function, the inverse of w -> w*e^w.
// `principal` is W_0 (w >= -1), `lower` is W_{-1} (w <= -1); both are real
// exactly for arguments in [-1/e, 0), and W_0 additionally for z >= 0.
enum class Branch { principal, lower };

// Absolute slack accepted below the branch point -1/e before raising
// DomainError. Callers routinely compute arguments that are analytically
// equal to -1/e; rounding may land them a few ulps outside.
inline constexpr double kBranchPointSlack = 1e-12;

/// Principal branch W_0(z) for z >= -1/e - slack. Satisfies w*e^w = z with
/// |w*e^w - z| <= 1e-13*max(1,|z|) and w >= -1.
double w0(double z);

/// Lower branch W_{-1}(z) for -1/e - slack <= z < 0. Satisfies w*e^w = z
/// with |w*e^w - z| <= 1e-13*max(1,|z|) and w <= -1.
double wm1(double z);

/// Branch dispatch.
double lambert_w(Branch branch, double z);

/// Defining-identity residual w*e^w - z, evaluated in working precision.
double w_residual(double w, double z);

const char* branch_name(Branch branch);

}  // namespace threebody
