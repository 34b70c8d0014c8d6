#pragma once

#include "bsl/forward_solver.hpp"
#include "bsl/geometry.hpp"

namespace bsl {

/// Leading high-frequency term of u^s(x; z, k) from the specular point y+.
struct AsymptoticPrediction {
    cplx leading;                       ///< predicted u^s
    cplx amplitude;                     ///< A_N(x, z, k)
    double reflection = 0.0;            ///< q = (gamma - 1)/(gamma + 1) at y+
    double phase = 0.0;                 ///< arg(leading)
    PathLengthStationaryPoint specular; ///< y+, path length and d^2 psi/ds^2
};

/// A_N = e^{(3-N) pi i/4}/(2k) * (k / (2 pi d_x d_z |det H|))^{(N-1)/2}.
cplx asymptotic_amplitude(double k, double dist_x, double dist_z, double hessian_det, int dimension = 2);

/// General bistatic configuration:
///
///   u^s ~ A_N (theta_x.n) (gamma + theta_z.n)/(gamma - theta_z.n) e^{i k psi},
///
/// with theta_x, theta_z the unit directions from x and z to y+. Dirichlet and Neumann use the
/// limits gamma -> infinity and gamma = 0 directly.
AsymptoticPrediction predict_general(const BoundaryCurve& curve, const ImpedanceModel& bc, const Point& x,
                                     const Point& z, double k);

/// Coincident source and receiver: u^s ~ -A_N(x, x, k) q e^{2 i k d}, d = |x - y+|.
AsymptoticPrediction predict_backscatter(const BoundaryCurve& curve, const ImpedanceModel& bc, const Point& x,
                                         double k);

} // namespace bsl
