#include "bsl/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bsl/error.hpp"
#include "bsl/parallel.hpp"

namespace bsl {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Robin points are scored only where the quotient is away from the gamma = infinity pole.
constexpr double kScoredQuotient = 0.8;

std::vector<Point> dense_samples(const BoundaryCurve& curve, int n)
{
    std::vector<Point> pts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        pts[static_cast<std::size_t>(i)] = curve.eval(kTwoPi * i / n).position;
    }
    return pts;
}

double directed_hausdorff(const std::vector<Point>& from, const std::vector<Point>& to)
{
    std::vector<double> nearest(from.size());
    parallel_for(from.size(), [&](std::size_t i) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& q : to) {
            best = std::min(best, (from[i] - q).squaredNorm());
        }
        nearest[i] = best;
    });
    return std::sqrt(*std::max_element(nearest.begin(), nearest.end()));
}

} // namespace

ReconstructionResult reconstruct(const ScatteringDataset& ds, const InversionOptions& options,
                                 const std::optional<BoundaryCurve>& boundary)
{
    if (ds.values.size() == 0) {
        throw DomainError("reconstruct: dataset is empty");
    }
    std::optional<IndicatorField> field;
    std::optional<ReferencePointSet> refs;
    std::optional<ShapeObjectiveReport> shape;
    if (!boundary) {
        field = indicator_total(ds, ImagingGrid::square(options.grid_half_width, options.grid_points));
        refs = extract_reference_points(*field, options.rho);
        shape = optimize_shape(*refs, options.shape);
    }
    const BoundaryCurve curve = boundary ? *boundary : shape->curve;
    ImpedanceRecovery recovery =
        recover_impedance(recover_quotients(ds, curve), options.tau_q, options.legendre_degree);
    return ReconstructionResult{std::move(field), std::move(refs), std::move(shape), curve, std::move(recovery)};
}

double hausdorff_distance(const BoundaryCurve& a, const BoundaryCurve& b, int samples)
{
    if (samples < 1) {
        throw DomainError("hausdorff_distance: need at least one sample");
    }
    const auto pa = dense_samples(a, samples);
    const auto pb = dense_samples(b, samples);
    return std::max(directed_hausdorff(pa, pb), directed_hausdorff(pb, pa));
}

double mean_radial_error(const BoundaryCurve& curve, const BoundaryCurve& truth, int samples)
{
    double sum = 0.0;
    for (const Point& p : dense_samples(curve, samples)) {
        sum += std::abs(truth.radial_excess(p));
    }
    return sum / samples;
}

MetricsReport compute_metrics(const ReconstructionResult& result, const nlohmann::json& truth)
{
    const BoundaryCurve true_curve = curve_from_json(truth.at("curve"));
    const ImpedanceModel bc = impedance_from_json(truth.at("bc"));
    MetricsReport m;
    if (result.shape) {
        m.shape_hausdorff = hausdorff_distance(result.boundary, true_curve);
        m.shape_mean_radial_error = mean_radial_error(result.boundary, true_curve);
    }

    const ImpedanceRecovery& rec = result.recovery;
    double q_sum = 0.0, g_sum = 0.0, g_max = 0.0;
    for (const SourceImpedance& s : rec.sources) {
        const double theta_true = true_curve.polar_angle(s.q.closest.position);
        const double q_true = bc.quotient(theta_true);
        const double err = std::abs(s.q.quotient - q_true);
        m.q_errors.push_back(err);
        q_sum += err;

        BoundaryKind expected = BoundaryKind::Robin;
        if (std::abs(q_true - 1.0) < rec.tau_q) {
            expected = BoundaryKind::Dirichlet;
        } else if (std::abs(q_true + 1.0) < rec.tau_q) {
            expected = BoundaryKind::Neumann;
        }
        if (s.classification != expected) {
            ++m.misclassified;
        }

        if (bc.kind() == BoundaryKind::Robin && s.classification == BoundaryKind::Robin && rec.fit &&
            std::abs(s.q.quotient) < kScoredQuotient) {
            const double g_true = bc.gamma(theta_true);
            const double rel = std::abs((*rec.fit)(s.q.closest.theta) - g_true) / g_true;
            ++m.gamma_points;
            g_sum += rel;
            g_max = std::max(g_max, rel);
        }
    }
    if (!m.q_errors.empty()) {
        m.q_error_mean = q_sum / static_cast<double>(m.q_errors.size());
    }
    if (m.gamma_points > 0) {
        m.gamma_max_relative_error = g_max;
        m.gamma_mean_relative_error = g_sum / m.gamma_points;
    }
    return m;
}

nlohmann::json to_json(const MetricsReport& m)
{
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    return {{"shape_hausdorff", opt(m.shape_hausdorff)},
            {"shape_mean_radial_error", opt(m.shape_mean_radial_error)},
            {"q_errors", m.q_errors},
            {"q_error_mean", opt(m.q_error_mean)},
            {"misclassified", m.misclassified},
            {"gamma_points", m.gamma_points},
            {"gamma_max_relative_error", opt(m.gamma_max_relative_error)},
            {"gamma_mean_relative_error", opt(m.gamma_mean_relative_error)}};
}

} // namespace bsl
