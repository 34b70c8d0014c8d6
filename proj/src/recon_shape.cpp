#include "bsl/recon_shape.hpp"

#include <cmath>

#include "bsl/error.hpp"
#include "bsl/parallel.hpp"

namespace bsl {
namespace {

constexpr int kMaxHalvings = 60;

struct PointTerm {
    double distance = 0.0;
    bool inside = false;
    double theta = 0.0;
    double radial = 0.0; // (y - p).e_r at the closest point
};

std::vector<PointTerm> point_terms(const BoundaryCurve& curve, std::span<const Point> points)
{
    const CurveProjector projector(curve);
    std::vector<PointTerm> terms(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        const Point& p = points[i];
        const ClosestPoint cp = projector.closest(p, true);
        const double th = cp.point.theta;
        const Point er(std::cos(th), std::sin(th));
        terms[i] = {cp.distance, curve.radial_excess(p) < 0.0, th, (cp.point.position - p).dot(er)};
    });
    return terms;
}

} // namespace

ReferencePointSet extract_reference_points(const IndicatorField& field, double rho)
{
    if (!(rho > 0.0 && rho < 1.0)) {
        throw DomainError("threshold rho must lie in (0, 1)");
    }
    ReferencePointSet refs;
    refs.threshold = rho;
    refs.max_indicator = field.max_total();
    refs.grid = field.grid;
    const double cut = rho * refs.max_indicator;
    for (std::size_t p = 0; p < field.total.size(); ++p) {
        if (field.total[p] > cut) {
            refs.points.push_back(field.grid.point(p));
        }
    }
    if (refs.points.empty()) {
        throw DomainError("no grid point exceeds the threshold; lower rho");
    }
    return refs;
}

double shape_objective(const BoundaryCurve& curve, std::span<const Point> points, double w_in, double w_out,
                       std::vector<double>* gradient, std::vector<double>* distances, std::vector<bool>* interior)
{
    if (points.empty()) {
        throw DomainError("shape objective needs at least one reference point");
    }
    const std::vector<PointTerm> terms = point_terms(curve, points);
    const int order = curve.order();
    const double inv_n = 1.0 / static_cast<double>(points.size());
    double total = 0.0;
    if (gradient) {
        gradient->assign(static_cast<std::size_t>(2 * order + 1), 0.0);
    }
    for (const PointTerm& t : terms) {
        const double w = t.inside ? w_in : w_out;
        total += w * t.distance * t.distance;
        if (gradient) {
            // d(d^2)/dr = 2 (y - p).e_r, and r is linear in the coefficients
            const double g = 2.0 * w * t.radial * inv_n;
            (*gradient)[0] += g;
            for (int m = 1; m <= order; ++m) {
                (*gradient)[static_cast<std::size_t>(m)] += g * std::cos(m * t.theta);
                (*gradient)[static_cast<std::size_t>(order + m)] += g * std::sin(m * t.theta);
            }
        }
    }
    if (distances) {
        distances->clear();
        for (const PointTerm& t : terms) {
            distances->push_back(t.distance);
        }
    }
    if (interior) {
        interior->clear();
        for (const PointTerm& t : terms) {
            interior->push_back(t.inside);
        }
    }
    return total * inv_n;
}

ShapeObjectiveReport optimize_shape(std::span<const Point> points, const ShapeOptions& options)
{
    if (points.empty()) {
        throw DomainError("optimize_shape: no reference points");
    }
    if (options.order < 0) {
        throw DomainError("optimize_shape: Fourier order must be non-negative");
    }
    if (!(options.w_in > 0.0) || !(options.w_out > 0.0)) {
        throw DomainError("optimize_shape: weights must be positive");
    }

    Point center = Point::Zero();
    if (options.center) {
        center = *options.center;
    } else {
        for (const Point& p : points) {
            center += p;
        }
        center /= static_cast<double>(points.size());
    }
    double a0 = 0.0;
    for (const Point& p : points) {
        a0 += (p - center).norm();
    }
    a0 /= static_cast<double>(points.size());
    if (!(a0 > 0.0)) {
        throw DomainError("optimize_shape: reference points coincide with the center");
    }

    const auto m = static_cast<std::size_t>(options.order);
    std::vector<double> coeffs(2 * m + 1, 0.0);
    coeffs[0] = a0;
    BoundaryCurve curve = BoundaryCurve::from_coefficients(coeffs, center);

    ShapeObjectiveReport report{curve, 0.0, 0, false, {}, {}, {}};
    std::vector<double> grad;
    double objective = shape_objective(curve, points, options.w_in, options.w_out, &grad);
    report.history.push_back(objective);

    while (report.iterations < options.max_iterations && objective > 0.0) {
        double step = options.initial_step;
        bool feasible = false;
        bool accepted = false;
        std::vector<double> trial(coeffs.size());
        double trial_objective = objective;
        std::vector<double> trial_grad;
        for (int h = 0; h < kMaxHalvings && !accepted; ++h, step *= 0.5) {
            for (std::size_t c = 0; c < coeffs.size(); ++c) {
                trial[c] = coeffs[c] - step * grad[c];
            }
            std::optional<BoundaryCurve> candidate;
            try {
                candidate.emplace(BoundaryCurve::from_coefficients(trial, center));
            } catch (const DomainError&) {
                continue; // radius not positive everywhere
            }
            feasible = true;
            trial_objective = shape_objective(*candidate, points, options.w_in, options.w_out, &trial_grad);
            if (trial_objective < objective) {
                accepted = true;
                curve = *candidate;
            }
        }
        if (!feasible) {
            throw NumericalError("optimize_shape: every trial step leaves the space of star-shaped curves");
        }
        if (!accepted) {
            report.converged = true; // no descent left at round-off level
            break;
        }
        ++report.iterations;
        const double change = objective - trial_objective;
        coeffs = trial;
        grad = trial_grad;
        objective = trial_objective;
        report.history.push_back(objective);
        if (objective == 0.0 || change / objective < options.relative_tolerance) {
            report.converged = true;
            break;
        }
    }
    if (objective == 0.0) {
        report.converged = true;
    }

    report.curve = curve;
    report.objective = shape_objective(curve, points, options.w_in, options.w_out, nullptr, &report.distances,
                                       &report.interior);
    return report;
}

ShapeObjectiveReport optimize_shape(const ReferencePointSet& refs, const ShapeOptions& options)
{
    return optimize_shape(std::span<const Point>(refs.points), options);
}

nlohmann::json to_json(const ShapeObjectiveReport& report)
{
    nlohmann::json interior = nlohmann::json::array();
    for (bool b : report.interior) {
        interior.push_back(b);
    }
    return {{"curve", report.curve},
            {"objective", report.objective},
            {"iterations", report.iterations},
            {"converged", report.converged},
            {"distances", report.distances},
            {"interior", std::move(interior)},
            {"history", report.history}};
}

} // namespace bsl
