#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bsl/geometry.hpp"
#include "bsl/recon_sampling.hpp"

namespace bsl {

/// Grid points where the total indicator exceeds rho times its maximum, in grid (row-major) order.
struct ReferencePointSet {
    std::vector<Point> points;
    double threshold = 0.0;     ///< rho
    double max_indicator = 0.0; ///< max of the field the points were taken from
    ImagingGrid grid;
};

ReferencePointSet extract_reference_points(const IndicatorField& field, double rho);

struct ShapeOptions {
    int order = 8;
    double w_in = 100.0;
    double w_out = 1.0;
    int max_iterations = 500;
    double relative_tolerance = 1e-8; ///< stop when |L_prev - L| / L falls below this
    double initial_step = 0.1;
    std::optional<Point> center;      ///< polar center; centroid of the points by default
};

struct ShapeObjectiveReport {
    BoundaryCurve curve;
    double objective = 0.0; ///< L = (1/N) sum w_i d_i^2
    int iterations = 0;
    bool converged = false;
    std::vector<double> distances; ///< d(p_i, curve)
    std::vector<bool> interior;    ///< p_i strictly inside the curve
    std::vector<double> history;   ///< L after each accepted step, starting with the initial circle
};

/// Weighted objective and, if requested, its gradient with respect to [a0, a_1..a_M, b_1..b_M].
/// The gradient holds each closest-point parameter fixed, which is exact for the squared distance.
double shape_objective(const BoundaryCurve& curve, std::span<const Point> points, double w_in, double w_out,
                       std::vector<double>* gradient = nullptr, std::vector<double>* distances = nullptr,
                       std::vector<bool>* interior = nullptr);

/// Gradient descent with backtracking from the circle of mean radius about the center.
ShapeObjectiveReport optimize_shape(std::span<const Point> points, const ShapeOptions& options = {});
ShapeObjectiveReport optimize_shape(const ReferencePointSet& refs, const ShapeOptions& options = {});

nlohmann::json to_json(const ShapeObjectiveReport& report);

} // namespace bsl
