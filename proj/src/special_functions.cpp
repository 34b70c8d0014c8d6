#include "bsl/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bsl/error.hpp"

namespace bsl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;

// Above this argument orders 0 and 1 come from the Hankel asymptotic expansion;
// its optimally truncated error there is about e^{-2x}.
constexpr double kAsymptoticThreshold = 25.0;

constexpr double kRescaleLimit = 1e250;

int miller_start(int nmax, double x)
{
    const double big = std::max(static_cast<double>(nmax), x);
    int m = static_cast<int>(big + 20.0 + 12.0 * std::cbrt(big + 1.0));
    return m + (m % 2);
}

// Hankel asymptotic expansion: P and Q such that
//   J_nu = sqrt(2/(pi x)) (P cos chi - Q sin chi),  Y_nu = sqrt(2/(pi x)) (P sin chi + Q cos chi).
void hankel_pq(int nu, double x, double& p, double& q)
{
    const double mu = 4.0 * nu * nu;
    p = 1.0;
    q = 0.0;
    double term = 1.0;
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        const double magnitude = std::abs(term);
        if (magnitude > previous || magnitude < 1e-18) {
            break;
        }
        previous = magnitude;
        // a_k / x^k enters with sign (-1)^{floor(k/2)}
        const double signed_term = ((k / 2) % 2 == 0) ? term : -term;
        if (k % 2 == 0) {
            p += signed_term;
        } else {
            q += signed_term;
        }
    }
}

BesselOrder01 asymptotic01(double x)
{
    const double scale = std::sqrt(2.0 / (kPi * x));
    double p0, q0, p1, q1;
    hankel_pq(0, x, p0, q0);
    hankel_pq(1, x, p1, q1);
    const double chi0 = x - 0.25 * kPi;
    // chi1 = chi0 - pi/2, so cos chi1 = sin chi0, sin chi1 = -cos chi0
    const double c = std::cos(chi0);
    const double s = std::sin(chi0);
    BesselOrder01 out{};
    out.j0 = scale * (p0 * c - q0 * s);
    out.y0 = scale * (p0 * s + q0 * c);
    out.j1 = scale * (p1 * s + q1 * c);
    out.y1 = scale * (-p1 * c + q1 * s);
    return out;
}

// Miller recurrence for J_0, J_1 plus the Neumann series for Y_0 and Y_1:
//   Y_0 = (2/pi)[(ln(x/2)+g) J_0 - 2 sum_k (-1)^k J_2k / k]
//   Y_1 = -Y_0' = (2/pi)[(ln(x/2)+g) J_1 - J_0/x + sum_k (-1)^k (J_{2k-1} - J_{2k+1}) / k]
BesselOrder01 miller01(double x)
{
    const int m = miller_start(1, x);
    double next = 0.0;     // J_{k+1}
    double current = 1e-30; // J_k, k = m
    double norm = 0.0;
    double sum_y0 = 0.0;
    double sum_y1 = 0.0;
    double j1 = 0.0;
    for (int k = m; k >= 1; --k) {
        const double lower = (2.0 * k / x) * current - next; // J_{k-1}
        if (k % 2 == 0) {
            const int half = k / 2;
            const double sign = (half % 2 == 0) ? 1.0 : -1.0;
            norm += 2.0 * current;
            sum_y0 += sign * current / half;
            // J_{2k-1} = lower, J_{2k+1} = next
            sum_y1 += sign * (lower - next) / half;
        }
        if (k == 1) {
            j1 = current;
        }
        next = current;
        current = lower;
        if (std::abs(current) > kRescaleLimit) {
            const double r = 1.0 / kRescaleLimit;
            next *= r;
            current *= r;
            norm *= r;
            sum_y0 *= r;
            sum_y1 *= r;
            j1 *= r;
        }
    }
    norm += current;
    const double j0 = current / norm;
    j1 /= norm;
    sum_y0 /= norm;
    sum_y1 /= norm;
    const double log_term = std::log(0.5 * x) + kEulerGamma;
    BesselOrder01 out{};
    out.j0 = j0;
    out.j1 = j1;
    out.y0 = (2.0 / kPi) * (log_term * j0 - 2.0 * sum_y0);
    out.y1 = (2.0 / kPi) * (log_term * j1 - j0 / x + sum_y1);
    return out;
}

void require_positive(double x, const char* what)
{
    if (!(x > 0.0)) {
        throw DomainError(std::string(what) + ": argument must be positive, got " + std::to_string(x));
    }
}

double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

} // namespace

BesselOrder01 bessel_order01(double x)
{
    require_positive(x, "bessel_order01");
    return x >= kAsymptoticThreshold ? asymptotic01(x) : miller01(x);
}

void bessel_j_sequence(double x, std::span<double> out)
{
    if (out.empty()) {
        return;
    }
    if (x < 0.0) {
        throw DomainError("bessel_j_sequence: negative argument");
    }
    const int nmax = static_cast<int>(out.size()) - 1;
    if (x == 0.0) {
        out[0] = 1.0;
        for (int n = 1; n <= nmax; ++n) {
            out[n] = 0.0;
        }
        return;
    }
    const int m = miller_start(nmax, x);
    double next = 0.0;
    double current = 1e-30;
    double norm = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        out[n] = 0.0;
    }
    for (int k = m; k >= 1; --k) {
        if (k <= nmax) {
            out[k] = current;
        }
        if (k % 2 == 0) {
            norm += 2.0 * current;
        }
        const double lower = (2.0 * k / x) * current - next;
        next = current;
        current = lower;
        if (std::abs(current) > kRescaleLimit) {
            const double r = 1.0 / kRescaleLimit;
            next *= r;
            current *= r;
            norm *= r;
            for (int n = 1; n <= nmax; ++n) {
                out[n] *= r;
            }
        }
    }
    out[0] = current;
    norm += current;
    for (int n = 0; n <= nmax; ++n) {
        out[n] /= norm;
    }
}

void bessel_y_sequence(double x, std::span<double> out)
{
    if (out.empty()) {
        return;
    }
    require_positive(x, "bessel_y_sequence");
    const BesselOrder01 b = bessel_order01(x);
    out[0] = b.y0;
    if (out.size() > 1) {
        out[1] = b.y1;
    }
    for (std::size_t n = 1; n + 1 < out.size(); ++n) {
        out[n + 1] = (2.0 * static_cast<double>(n) / x) * out[n] - out[n - 1];
    }
}

double bessel_j(int n, double x)
{
    if (x < 0.0) {
        throw DomainError("bessel_j: negative argument");
    }
    const int order = std::abs(n);
    const double sign = n < 0 ? parity(order) : 1.0;
    if (order <= 1 && x >= kAsymptoticThreshold) {
        const BesselOrder01 b = asymptotic01(x);
        return sign * (order == 0 ? b.j0 : b.j1);
    }
    std::vector<double> values(order + 1);
    bessel_j_sequence(x, values);
    return sign * values[order];
}

double bessel_y(int n, double x)
{
    require_positive(x, "bessel_y");
    const int order = std::abs(n);
    const double sign = n < 0 ? parity(order) : 1.0;
    std::vector<double> values(order + 1);
    bessel_y_sequence(x, values);
    return sign * values[order];
}

cplx hankel1(int n, double x)
{
    require_positive(x, "hankel1");
    return {bessel_j(n, x), bessel_y(n, x)};
}

cplx hankel1_derivative(int n, double x)
{
    return 0.5 * (hankel1(n - 1, x) - hankel1(n + 1, x));
}

double bessel_j_derivative(int n, double x)
{
    return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x));
}

cplx fundamental_solution(const Eigen::Vector2d& y, const Eigen::Vector2d& z, double k)
{
    if (!(k > 0.0)) {
        throw DomainError("fundamental_solution: wavenumber must be positive");
    }
    const double r = (y - z).norm();
    if (r == 0.0) {
        throw DomainError("fundamental_solution: source and observation points coincide");
    }
    return cplx(0.0, 0.25) * bessel_order01(k * r).h0();
}

cplx green_asymptotic_constant(double k)
{
    const cplx i(0.0, 1.0);
    return i / (2.0 * k) * std::sqrt(k / (2.0 * kPi * i));
}

} // namespace bsl
