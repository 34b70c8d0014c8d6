#include "bsl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "bsl/error.hpp"

namespace bsl {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta)
{
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) {
        t += kTwoPi;
    }
    return t >= kTwoPi ? 0.0 : t;
}

std::string format_point(const Point& p)
{
    return "(" + std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")";
}

// Minimizes a smooth 1D function on [lo, hi] given its derivative. Uses bisection on the
// derivative when it changes sign across the bracket, golden-section search otherwise.
template <typename F, typename DF>
double refine_minimum(double lo, double hi, const F& f, const DF& df)
{
    double g_lo = df(lo);
    double g_hi = df(hi);
    if (g_lo < 0.0 && g_hi > 0.0) {
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double g = df(mid);
            if (g == 0.0) {
                return mid;
            }
            if (g < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo;
    double b = hi;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

int scan_size(const BoundaryCurve& curve, int requested)
{
    return std::max(requested, 16 * (curve.order() + 1));
}

} // namespace

BoundaryCurve::BoundaryCurve(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                             Point center)
    : a0_(a0), cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)), center_(std::move(center))
{
    if (cos_.size() != sin_.size()) {
        throw DomainError("BoundaryCurve: cosine and sine coefficient counts differ");
    }
    if (!std::isfinite(a0_) || !center_.allFinite() ||
        !std::all_of(cos_.begin(), cos_.end(), [](double v) { return std::isfinite(v); }) ||
        !std::all_of(sin_.begin(), sin_.end(), [](double v) { return std::isfinite(v); })) {
        throw DomainError("BoundaryCurve: non-finite coefficient");
    }
    const int n = std::max(4096, 64 * (order() + 1));
    for (int i = 0; i < n; ++i) {
        const double theta = kTwoPi * i / n;
        if (!(radius(theta) > 0.0)) {
            throw DomainError("BoundaryCurve: radius is not positive at theta = " + std::to_string(theta));
        }
    }
}

BoundaryCurve BoundaryCurve::circle(double radius, Point center)
{
    return BoundaryCurve(radius, {}, {}, std::move(center));
}

BoundaryCurve BoundaryCurve::from_coefficients(std::span<const double> coeffs, Point center)
{
    if (coeffs.empty() || coeffs.size() % 2 == 0) {
        throw DomainError("BoundaryCurve: flat coefficient vector must have odd length 2M+1");
    }
    const std::size_t m = (coeffs.size() - 1) / 2;
    std::vector<double> a(coeffs.begin() + 1, coeffs.begin() + 1 + static_cast<std::ptrdiff_t>(m));
    std::vector<double> b(coeffs.begin() + 1 + static_cast<std::ptrdiff_t>(m), coeffs.end());
    return BoundaryCurve(coeffs[0], std::move(a), std::move(b), std::move(center));
}

std::vector<double> BoundaryCurve::coefficients() const
{
    std::vector<double> out;
    out.reserve(1 + 2 * cos_.size());
    out.push_back(a0_);
    out.insert(out.end(), cos_.begin(), cos_.end());
    out.insert(out.end(), sin_.begin(), sin_.end());
    return out;
}

Eigen::Vector3d BoundaryCurve::radial(double theta) const
{
    const double c1 = std::cos(theta);
    const double s1 = std::sin(theta);
    double cm = 1.0;
    double sm = 0.0;
    double r = a0_;
    double dr = 0.0;
    double ddr = 0.0;
    for (std::size_t i = 0; i < cos_.size(); ++i) {
        const double c = cm * c1 - sm * s1;
        const double s = sm * c1 + cm * s1;
        cm = c;
        sm = s;
        const double m = static_cast<double>(i + 1);
        const double a = cos_[i];
        const double b = sin_[i];
        r += a * c + b * s;
        dr += m * (b * c - a * s);
        ddr -= m * m * (a * c + b * s);
    }
    return {r, dr, ddr};
}

double BoundaryCurve::radius(double theta) const { return radial(theta)[0]; }

CurveDerivatives BoundaryCurve::derivatives(double theta) const
{
    const Eigen::Vector3d rad = radial(theta);
    const Point er(std::cos(theta), std::sin(theta));
    const Point et(-er.y(), er.x());
    return {center_ + rad[0] * er, rad[1] * er + rad[0] * et, (rad[2] - rad[0]) * er + 2.0 * rad[1] * et};
}

CurvePoint BoundaryCurve::eval(double theta) const
{
    const Eigen::Vector3d rad = radial(theta);
    const double r = rad[0];
    const double dr = rad[1];
    const double ddr = rad[2];
    if (!(r > 0.0)) {
        throw DomainError("eval_curve: radius is not positive at theta = " + std::to_string(theta));
    }
    const Point er(std::cos(theta), std::sin(theta));
    const Point et(-er.y(), er.x());
    const double speed = std::hypot(r, dr);
    CurvePoint p;
    p.theta = theta;
    p.position = center_ + r * er;
    p.normal = (r * er - dr * et) / speed;
    p.curvature = (r * r + 2.0 * dr * dr - r * ddr) / (speed * speed * speed);
    p.speed = speed;
    return p;
}

double BoundaryCurve::polar_angle(const Point& x) const
{
    const Point d = x - center_;
    return wrap_angle(std::atan2(d.y(), d.x()));
}

double BoundaryCurve::radial_excess(const Point& x) const
{
    return (x - center_).norm() - radius(polar_angle(x));
}

double BoundaryCurve::perimeter() const
{
    const int n = 2048;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d rad = radial(kTwoPi * i / n);
        sum += std::hypot(rad[0], rad[1]);
    }
    return sum * kTwoPi / n;
}

double BoundaryCurve::max_radius() const
{
    const int n = 2048;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        best = std::max(best, radius(kTwoPi * i / n));
    }
    return best;
}

CurvePoint eval_curve(const BoundaryCurve& curve, double theta) { return curve.eval(theta); }

CurveFit fit_curve(std::span<const Point> samples, int order, std::optional<Point> center)
{
    if (order < 0) {
        throw DomainError("fit_curve: negative order");
    }
    if (samples.empty()) {
        throw DomainError("fit_curve: no samples");
    }
    Point c = Point::Zero();
    if (center) {
        c = *center;
    } else {
        for (const Point& p : samples) {
            c += p;
        }
        c /= static_cast<double>(samples.size());
    }

    struct Polar {
        double theta;
        double r;
    };
    std::vector<Polar> polar;
    polar.reserve(samples.size());
    for (const Point& p : samples) {
        const Point d = p - c;
        const double r = d.norm();
        if (r <= 1e-12) {
            throw DomainError("fit_curve: sample coincides with the polar center " + format_point(c) +
                              "; point cloud is not star-shaped");
        }
        polar.push_back({wrap_angle(std::atan2(d.y(), d.x())), r});
    }
    std::sort(polar.begin(), polar.end(), [](const Polar& a, const Polar& b) { return a.theta < b.theta; });

    std::size_t distinct = 1;
    for (std::size_t i = 1; i < polar.size(); ++i) {
        if (polar[i].theta - polar[i - 1].theta < 1e-12) {
            if (std::abs(polar[i].r - polar[i - 1].r) > 1e-9 * std::max(polar[i].r, polar[i - 1].r)) {
                throw DomainError("fit_curve: two samples share the angle " + std::to_string(polar[i].theta) +
                                  " with different radii; point cloud is not star-shaped");
            }
        } else {
            ++distinct;
        }
    }
    const std::size_t unknowns = 2 * static_cast<std::size_t>(order) + 1;
    if (distinct < unknowns) {
        throw DomainError("fit_curve: " + std::to_string(distinct) + " distinct angles cannot determine " +
                          std::to_string(unknowns) + " coefficients");
    }

    Eigen::MatrixXd design(static_cast<Eigen::Index>(polar.size()), static_cast<Eigen::Index>(unknowns));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(polar.size()));
    for (std::size_t i = 0; i < polar.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        design(row, 0) = 1.0;
        for (int m = 1; m <= order; ++m) {
            design(row, m) = std::cos(m * polar[i].theta);
            design(row, order + m) = std::sin(m * polar[i].theta);
        }
        rhs[row] = polar[i].r;
    }
    const Eigen::VectorXd coeffs = design.colPivHouseholderQr().solve(rhs);
    const double rms = std::sqrt((design * coeffs - rhs).squaredNorm() / static_cast<double>(polar.size()));
    std::vector<double> flat(coeffs.data(), coeffs.data() + coeffs.size());
    return {BoundaryCurve::from_coefficients(flat, c), rms};
}

CurveProjector::CurveProjector(const BoundaryCurve& curve, int samples) : curve_(curve)
{
    const int n = scan_size(curve_, samples);
    thetas_.resize(static_cast<std::size_t>(n));
    positions_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double theta = kTwoPi * i / n;
        const double r = curve_.radius(theta);
        thetas_[static_cast<std::size_t>(i)] = theta;
        positions_[static_cast<std::size_t>(i)] = curve_.center() + r * Point(std::cos(theta), std::sin(theta));
    }
}

ClosestPoint CurveProjector::closest(const Point& x, bool allow_inside) const
{
    if (!allow_inside && !curve_.strictly_outside(x)) {
        throw DomainError("closest_point: point " + format_point(x) + " is not strictly outside the curve");
    }
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        const double d2 = (positions_[i] - x).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    const double step = kTwoPi / static_cast<double>(thetas_.size());
    const double center_theta = thetas_[best];
    auto f = [&](double t) { return (curve_.derivatives(t).position - x).squaredNorm(); };
    auto df = [&](double t) {
        const CurveDerivatives d = curve_.derivatives(t);
        return 2.0 * (d.position - x).dot(d.first);
    };
    const double theta = refine_minimum(center_theta - step, center_theta + step, f, df);
    ClosestPoint out{curve_.eval(wrap_angle(theta)), 0.0};
    out.distance = (out.point.position - x).norm();
    return out;
}

ClosestPoint closest_point(const BoundaryCurve& curve, const Point& x)
{
    return CurveProjector(curve).closest(x);
}

double path_length(const BoundaryCurve& curve, double theta, const Point& x, const Point& z)
{
    const Point y = curve.derivatives(theta).position;
    return (x - y).norm() + (y - z).norm();
}

bool is_illuminated(const CurvePoint& y, const Point& x, const Point& z)
{
    return y.normal.dot(y.position - x) < 0.0 && y.normal.dot(y.position - z) < 0.0;
}

PathLengthStationaryPoint stationary_point(const BoundaryCurve& curve, const Point& x, const Point& z)
{
    if (!curve.strictly_outside(x) || !curve.strictly_outside(z)) {
        throw DomainError("stationary_point: receiver " + format_point(x) + " and source " + format_point(z) +
                          " must both lie strictly outside the curve");
    }
    const int n = scan_size(curve, 512);
    int best = -1;
    double best_psi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const CurvePoint y = curve.eval(kTwoPi * i / n);
        if (!is_illuminated(y, x, z)) {
            continue;
        }
        const double psi = (x - y.position).norm() + (y.position - z).norm();
        if (psi < best_psi) {
            best_psi = psi;
            best = i;
        }
    }
    if (best < 0) {
        throw DomainError("stationary_point: no boundary point is illuminated from both " + format_point(x) +
                          " and " + format_point(z));
    }

    auto psi = [&](double t) { return path_length(curve, t, x, z); };
    auto dpsi = [&](double t) {
        const CurveDerivatives d = curve.derivatives(t);
        const Point ux = (d.position - x).normalized();
        const Point uz = (d.position - z).normalized();
        return (ux + uz).dot(d.first);
    };
    const double step = kTwoPi / n;
    const double theta = wrap_angle(refine_minimum(kTwoPi * best / n - step, kTwoPi * best / n + step, psi, dpsi));

    PathLengthStationaryPoint out;
    out.point = curve.eval(theta);
    out.path_length = psi(theta);
    out.source = z;
    out.receiver = x;
    if (!is_illuminated(out.point, x, z)) {
        throw NumericalError("stationary_point: minimizer left the illuminated side");
    }
    const double tangential = std::abs(dpsi(theta)) / out.point.speed;
    if (tangential >= 1e-10 * out.path_length) {
        throw NumericalError("stationary_point: no stationary point of the path length on the illuminated side "
                             "(|dpsi/ds| = " + std::to_string(tangential) + ")");
    }

    // Second arc-length derivative: at a stationary point d2psi/ds2 = psi_thetatheta / |y'|^2.
    // Central differences with arc-length step 1e-4, one Richardson extrapolation.
    const double h = 1e-4 / out.point.speed;
    auto second_difference = [&](double hh) {
        return (psi(theta + hh) - 2.0 * out.path_length + psi(theta - hh)) / (hh * hh);
    };
    const double coarse = second_difference(h);
    const double fine = second_difference(0.5 * h);
    out.hessian_det = (4.0 * fine - coarse) / 3.0 / (out.point.speed * out.point.speed);
    if (!(out.hessian_det > 0.0)) {
        throw NumericalError("stationary_point: degenerate stationary point (det H = " +
                             std::to_string(out.hessian_det) + ")");
    }
    return out;
}

void to_json(nlohmann::json& j, const BoundaryCurve& curve)
{
    j = nlohmann::json{{"center", {curve.center().x(), curve.center().y()}},
                       {"a0", curve.a0()},
                       {"a", std::vector<double>(curve.cos_coeffs().begin(), curve.cos_coeffs().end())},
                       {"b", std::vector<double>(curve.sin_coeffs().begin(), curve.sin_coeffs().end())}};
}

BoundaryCurve curve_from_json(const nlohmann::json& j)
{
    try {
        const auto center = j.at("center").get<std::vector<double>>();
        if (center.size() != 2) {
            throw ParseError("curve: field 'center' must have two entries");
        }
        return BoundaryCurve(j.at("a0").get<double>(), j.at("a").get<std::vector<double>>(),
                             j.at("b").get<std::vector<double>>(), Point(center[0], center[1]));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("curve: ") + e.what());
    }
}

namespace egg {

Point boundary_point(double t)
{
    return {1.5 * std::cos(t), std::sin(t) / (1.0 + 0.2 * std::cos(t))};
}

double parameter_from_angle(double theta)
{
    const double target = wrap_angle(theta);
    auto angle = [](double t) {
        const Point p = boundary_point(t);
        return wrap_angle(std::atan2(p.y(), p.x()));
    };
    // polar angle increases monotonically from 0 to 2 pi with t
    double lo = 0.0;
    double hi = kTwoPi;
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (angle(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<Point> samples(int count)
{
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(boundary_point(kTwoPi * i / count));
    }
    return out;
}

BoundaryCurve curve(int order)
{
    const std::vector<Point> pts = samples(std::max(2048, 8 * (2 * order + 1)));
    return fit_curve(pts, order, Point::Zero()).curve;
}

} // namespace egg

} // namespace bsl
