#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace bsl {

using Point = Eigen::Vector2d;

/// A point on a boundary curve with its local frame.
struct CurvePoint {
    double theta = 0.0;           ///< polar parameter, radians
    Point position = Point::Zero();
    Point normal = Point::Zero(); ///< outward unit normal
    double curvature = 0.0;       ///< signed, positive on convex arcs
    double speed = 0.0;           ///< |dy/dtheta|
};

/// Position and its first two derivatives with respect to the polar parameter.
struct CurveDerivatives {
    Point position;
    Point first;
    Point second;
};

/// Star-shaped closed curve y(theta) = center + r(theta) (cos theta, sin theta), with
///
///     r(theta) = a0 + sum_{m=1}^{M} a_m cos(m theta) + b_m sin(m theta).
///
/// Construction rejects coefficient sets whose radius is not strictly positive on a
/// dense angular grid. Instances are immutable.
class BoundaryCurve {
public:
    BoundaryCurve(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                  Point center = Point::Zero());

    static BoundaryCurve circle(double radius, Point center = Point::Zero());

    /// Flat coefficient layout [a0, a_1..a_M, b_1..b_M].
    static BoundaryCurve from_coefficients(std::span<const double> coeffs, Point center);
    [[nodiscard]] std::vector<double> coefficients() const;

    [[nodiscard]] int order() const { return static_cast<int>(cos_.size()); }
    [[nodiscard]] double a0() const { return a0_; }
    [[nodiscard]] std::span<const double> cos_coeffs() const { return cos_; }
    [[nodiscard]] std::span<const double> sin_coeffs() const { return sin_; }
    [[nodiscard]] const Point& center() const { return center_; }

    /// r, r', r'' at theta.
    [[nodiscard]] Eigen::Vector3d radial(double theta) const;
    [[nodiscard]] double radius(double theta) const;
    [[nodiscard]] CurveDerivatives derivatives(double theta) const;
    [[nodiscard]] CurvePoint eval(double theta) const;

    /// Polar angle of x about the center, in [0, 2 pi).
    [[nodiscard]] double polar_angle(const Point& x) const;
    /// |x - center| - r(angle of x): negative inside, positive outside.
    [[nodiscard]] double radial_excess(const Point& x) const;
    [[nodiscard]] bool strictly_outside(const Point& x) const { return radial_excess(x) > 0.0; }

    [[nodiscard]] double perimeter() const;
    [[nodiscard]] double max_radius() const;

private:
    double a0_;
    std::vector<double> cos_;
    std::vector<double> sin_;
    Point center_;
};

CurvePoint eval_curve(const BoundaryCurve& curve, double theta);

struct CurveFit {
    BoundaryCurve curve;
    double rms_residual;
};

/// Least-squares fit of the radial Fourier series to a star-shaped point cloud. The
/// polar center is `center` if given, otherwise the centroid of the samples.
CurveFit fit_curve(std::span<const Point> samples, int order,
                   std::optional<Point> center = std::nullopt);

struct ClosestPoint {
    CurvePoint point;
    double distance;
};

/// Closest-point queries against one curve, with the coarse scan samples cached.
class CurveProjector {
public:
    explicit CurveProjector(const BoundaryCurve& curve, int samples = 512);

    /// Closest point to x. Requires x strictly outside unless `allow_inside`.
    [[nodiscard]] ClosestPoint closest(const Point& x, bool allow_inside = false) const;

    [[nodiscard]] const BoundaryCurve& curve() const { return curve_; }

private:
    BoundaryCurve curve_;
    std::vector<double> thetas_;
    std::vector<Point> positions_;
};

/// argmin over the curve of ||x - y||. Throws DomainError if x is not strictly outside.
ClosestPoint closest_point(const BoundaryCurve& curve, const Point& x);

/// Stationary point of the path length psi(y) = ||x - y|| + ||y - z|| on the part of the
/// curve illuminated from both x and z.
struct PathLengthStationaryPoint {
    CurvePoint point;
    double path_length;
    double hessian_det; ///< d^2 psi / ds^2 at the stationary point
    Point source;       ///< z
    Point receiver;     ///< x
};

PathLengthStationaryPoint stationary_point(const BoundaryCurve& curve, const Point& x, const Point& z);

/// Path length psi at curve parameter theta.
double path_length(const BoundaryCurve& curve, double theta, const Point& x, const Point& z);

/// Both points see y: n(y).(y - x) < 0 and n(y).(y - z) < 0.
bool is_illuminated(const CurvePoint& y, const Point& x, const Point& z);

void to_json(nlohmann::json& j, const BoundaryCurve& curve);
BoundaryCurve curve_from_json(const nlohmann::json& j);

/// The egg-shaped test obstacle (1.5 cos t, sin t / (1 + 0.2 cos t)).
namespace egg {
Point boundary_point(double t);
/// Curve parameter t of the boundary point whose polar angle about the origin is theta.
double parameter_from_angle(double theta);
/// Dense parametric samples.
std::vector<Point> samples(int count);
/// Radial Fourier representation about the origin; order 40 resolves it to ~5e-10.
BoundaryCurve curve(int order = 40);
} // namespace egg

} // namespace bsl
