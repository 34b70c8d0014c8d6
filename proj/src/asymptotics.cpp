#include "bsl/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "bsl/error.hpp"

namespace bsl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI(0.0, 1.0);

AsymptoticPrediction finish(const PathLengthStationaryPoint& sp, cplx amplitude, cplx factor, double q, double k)
{
    AsymptoticPrediction p;
    p.amplitude = amplitude;
    p.leading = amplitude * factor * std::exp(kI * (k * sp.path_length));
    p.reflection = q;
    p.phase = std::arg(p.leading);
    p.specular = sp;
    return p;
}

void require_wavenumber(double k)
{
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw DomainError("asymptotic prediction: wavenumber must be positive");
    }
}

} // namespace

cplx asymptotic_amplitude(double k, double dist_x, double dist_z, double hessian_det, int dimension)
{
    if (dimension != 2 && dimension != 3) {
        throw DomainError("asymptotic_amplitude: dimension must be 2 or 3");
    }
    if (!(std::abs(hessian_det) > 0.0)) {
        throw NumericalError("asymptotic_amplitude: degenerate stationary point (det H = 0)");
    }
    const double base = k / (2.0 * kPi * dist_x * dist_z * std::abs(hessian_det));
    const double scale = std::pow(base, 0.5 * (dimension - 1));
    return std::exp(kI * ((3.0 - dimension) * kPi / 4.0)) * scale / (2.0 * k);
}

AsymptoticPrediction predict_general(const BoundaryCurve& curve, const ImpedanceModel& bc, const Point& x,
                                     const Point& z, double k)
{
    require_wavenumber(k);
    const PathLengthStationaryPoint sp = stationary_point(curve, x, z);
    const CurvePoint& y = sp.point;
    const double dx = (y.position - x).norm();
    const double dz = (y.position - z).norm();
    const double cx = (y.position - x).dot(y.normal) / dx;
    const double cz = (y.position - z).dot(y.normal) / dz;

    double factor = 0.0;
    switch (bc.kind()) {
    case BoundaryKind::Dirichlet:
        factor = cx;
        break;
    case BoundaryKind::Neumann:
        factor = -cx;
        break;
    case BoundaryKind::Robin: {
        const double gamma = bc.gamma(y.theta);
        const double denom = gamma - cz;
        if (std::abs(denom) < 1e-12) {
            throw NumericalError("predict_general: reflection factor has a pole at the specular point");
        }
        factor = cx * (gamma + cz) / denom;
        break;
    }
    }
    return finish(sp, asymptotic_amplitude(k, dx, dz, sp.hessian_det), factor, bc.quotient(y.theta), k);
}

AsymptoticPrediction predict_backscatter(const BoundaryCurve& curve, const ImpedanceModel& bc, const Point& x,
                                         double k)
{
    require_wavenumber(k);
    const PathLengthStationaryPoint sp = stationary_point(curve, x, x);
    const double d = (sp.point.position - x).norm();
    const double q = bc.quotient(sp.point.theta);
    return finish(sp, asymptotic_amplitude(k, d, d, sp.hessian_det), -q, q, k);
}

} // namespace bsl
