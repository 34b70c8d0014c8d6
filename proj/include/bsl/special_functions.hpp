#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace bsl {

using cplx = std::complex<double>;

/// Largest order and argument the Bessel routines are validated for.
inline constexpr int kMaxBesselOrder = 200;
inline constexpr double kMaxBesselArgument = 500.0;

/// Bessel function of the first kind J_n(x), x >= 0. Negative orders use J_{-n} = (-1)^n J_n.
double bessel_j(int n, double x);

/// Bessel function of the second kind Y_n(x), x > 0.
double bessel_y(int n, double x);

/// Hankel function of the first kind H_n^(1)(x) = J_n(x) + i Y_n(x), x > 0.
cplx hankel1(int n, double x);

/// Derivative d/dx H_n^(1)(x).
cplx hankel1_derivative(int n, double x);

/// Derivative d/dx J_n(x).
double bessel_j_derivative(int n, double x);

/// J_0..J_nmax at x, written into `out` (size nmax + 1). Miller's backward recurrence.
void bessel_j_sequence(double x, std::span<double> out);

/// Y_0..Y_nmax at x > 0 by upward recurrence from Y_0, Y_1.
void bessel_y_sequence(double x, std::span<double> out);

/// J_0, J_1, Y_0, Y_1 at one argument; the hot path of the boundary-integral kernels.
struct BesselOrder01 {
    double j0;
    double j1;
    double y0;
    double y1;

    [[nodiscard]] cplx h0() const { return {j0, y0}; }
    [[nodiscard]] cplx h1() const { return {j1, y1}; }
};
BesselOrder01 bessel_order01(double x);

/// Free-space Helmholtz Green's function in the plane, (i/4) H_0^(1)(k |y - z|).
cplx fundamental_solution(const Eigen::Vector2d& y, const Eigen::Vector2d& z, double k);

/// Leading high-frequency constant of the 2D Green's function,
/// C_2(k) = (i / 2k) sqrt(k / (2 pi i)), so that G ~ C_2(k) e^{ikr} / sqrt(r).
cplx green_asymptotic_constant(double k);

} // namespace bsl
