#pragma once

#include <optional>

#include <json.hpp>

#include "bsl/recon_impedance.hpp"
#include "bsl/recon_shape.hpp"

namespace bsl {

struct InversionOptions {
    double rho = 0.6;
    ShapeOptions shape;
    double tau_q = 0.2;
    int legendre_degree = 5;
    int grid_points = 201;    ///< per side
    double grid_half_width = 3.0;
};

/// Output of the three inversion steps. Steps 1-2 are skipped when a boundary is supplied.
struct ReconstructionResult {
    std::optional<IndicatorField> field;
    std::optional<ReferencePointSet> refs;
    std::optional<ShapeObjectiveReport> shape;
    BoundaryCurve boundary; ///< optimized or supplied
    ImpedanceRecovery recovery;
};

/// Runs direct sampling, shape optimization and impedance recovery. Never reads ds.truth.
ReconstructionResult reconstruct(const ScatteringDataset& ds, const InversionOptions& options = {},
                                 const std::optional<BoundaryCurve>& boundary = std::nullopt);

/// Symmetric Hausdorff distance between dense samples (n per curve, equispaced in the parameter).
double hausdorff_distance(const BoundaryCurve& a, const BoundaryCurve& b, int samples = 2048);

/// Mean |radial_excess| of the samples of `curve` with respect to `truth`.
double mean_radial_error(const BoundaryCurve& curve, const BoundaryCurve& truth, int samples = 2048);

struct MetricsReport {
    std::optional<double> shape_hausdorff;
    std::optional<double> shape_mean_radial_error;
    std::vector<double> q_errors;        ///< |q_i - q_true(y_i+)|
    std::optional<double> q_error_mean;
    int gamma_points = 0;                ///< Robin points with |q_i| < 0.8 scored against the truth
    std::optional<double> gamma_max_relative_error;
    std::optional<double> gamma_mean_relative_error;
    int misclassified = 0;
};

/// Scores a reconstruction against the generating curve and boundary condition ({"curve", "bc"}).
/// Shape metrics are omitted when the boundary was supplied rather than reconstructed.
MetricsReport compute_metrics(const ReconstructionResult& result, const nlohmann::json& truth);

nlohmann::json to_json(const MetricsReport& metrics);

} // namespace bsl
