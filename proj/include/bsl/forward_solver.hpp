#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bsl/geometry.hpp"
#include "bsl/special_functions.hpp"

namespace bsl {

enum class BoundaryKind { Dirichlet, Neumann, Robin };

std::string to_string(BoundaryKind kind);

/// Boundary operator B: u (Dirichlet), du/dn (Neumann) or du/dn + i k gamma u (Robin),
/// with gamma a strictly positive function of the curve parameter.
class ImpedanceModel {
public:
    static ImpedanceModel dirichlet();
    static ImpedanceModel neumann();
    static ImpedanceModel robin_constant(double gamma);
    /// `label` names the profile for serialization (e.g. "3+sin(t)").
    static ImpedanceModel robin(std::function<double(double)> gamma, std::string label);

    [[nodiscard]] BoundaryKind kind() const { return kind_; }
    [[nodiscard]] const std::string& label() const { return label_; }
    [[nodiscard]] std::optional<double> constant_gamma() const { return constant_; }

    /// gamma(theta); zero for Neumann. Throws for Dirichlet, which has no finite impedance.
    [[nodiscard]] double gamma(double theta) const;

    /// Reflection quotient q = (gamma - 1)/(gamma + 1); +1 Dirichlet, -1 Neumann.
    [[nodiscard]] double quotient(double theta) const;

private:
    ImpedanceModel(BoundaryKind kind, std::function<double(double)> gamma, std::optional<double> constant,
                   std::string label);

    BoundaryKind kind_;
    std::function<double(double)> gamma_;
    std::optional<double> constant_;
    std::string label_;
};

/// Smallest admissible quadrature size: 8 points per wavelength along the boundary, even.
int minimum_quadrature_size(const BoundaryCurve& curve, double k);

/// Accuracy budget used for data generation: max(256, 16 points per wavelength), even.
int default_quadrature_size(const BoundaryCurve& curve, double k);

/// Solution of the boundary integral equation for one point source.
///
/// Dirichlet: `values` is the density phi of u^s = (D - i k S) phi. Neumann/Robin: `values`
/// is the boundary trace of u^s and `flux` its outward normal derivative.
struct Density {
    Point source = Point::Zero();
    std::vector<cplx> values;
    std::vector<cplx> flux;
    double residual = 0.0; ///< ||A phi - b|| / ||b||
};

/// Boundary values of the scattered field at an arbitrary curve parameter.
struct BoundaryTrace {
    cplx value;
    cplx normal_derivative;
};

/// Nystrom discretization with 2n equispaced nodes in the polar parameter and Kress
/// trigonometric weights for the logarithmic kernel singularities.
///
///   Dirichlet:      (I/2 + K - i k S) phi = -u^i
///   Neumann/Robin:  Green's representation u^s = D u^s - S du^s/dn, trace equation plus
///                   c times its normal derivative (Burton-Miller, c = i/k); the hypersingular
///                   operator uses the Maue form T = d/ds S d/ds + k^2 n.S n.
///
/// An assembled system is immutable and may be shared across threads.
class NystromSystem {
public:
    static NystromSystem assemble(const BoundaryCurve& curve, double k, const ImpedanceModel& bc, int n_quad);

    [[nodiscard]] Density solve(const Point& source) const;
    [[nodiscard]] std::vector<Density> solve(std::span<const Point> sources) const;

    /// u^s at x, which must be strictly outside and farther than three node spacings from the curve.
    [[nodiscard]] cplx evaluate(const Density& density, const Point& x) const;

    /// Scattered field and its normal derivative on the boundary (Neumann/Robin only), by
    /// trigonometric interpolation of the nodal values.
    [[nodiscard]] BoundaryTrace trace_at(const Density& density, double theta) const;

    [[nodiscard]] double wavenumber() const { return k_; }
    [[nodiscard]] int size() const { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] const BoundaryCurve& curve() const { return projector_.curve(); }
    [[nodiscard]] const ImpedanceModel& boundary_condition() const { return bc_; }
    [[nodiscard]] double reciprocal_condition() const { return rcond_; }
    [[nodiscard]] const std::vector<CurvePoint>& nodes() const { return nodes_; }
    [[nodiscard]] const Eigen::MatrixXcd& matrix() const { return matrix_; }

private:
    NystromSystem(const BoundaryCurve& curve, double k, ImpedanceModel bc);

    Eigen::VectorXcd right_hand_side(const Point& source) const;
    Density finish(const Point& source, const Eigen::VectorXcd& rhs, Eigen::VectorXcd solution) const;

    CurveProjector projector_;
    double k_;
    ImpedanceModel bc_;
    std::vector<CurvePoint> nodes_;
    std::vector<double> gamma_;
    double node_spacing_ = 0.0;
    Eigen::MatrixXcd matrix_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    Eigen::MatrixXcd single_layer_;   // Neumann/Robin right-hand side
    Eigen::MatrixXcd adjoint_double_; // Neumann/Robin right-hand side
    double rcond_ = 0.0;
};

/// Normal derivative of the incident field (i/4) H_0(k|y - z|) at boundary point y.
cplx incident_normal_derivative(const CurvePoint& y, const Point& z, double k);

/// Convenience: u^s(x; z, k) from a fresh system of default size.
cplx scattered_field(const BoundaryCurve& curve, const ImpedanceModel& bc, double k, const Point& z,
                     const Point& x);

/// Coefficient c_n of the circle series: -J_n/H_n (Dirichlet), -J_n'/H_n' (Neumann),
/// -(J_n' + i gamma J_n)/(H_n' + i gamma H_n) (Robin), all at ka.
cplx mie_reflection_coefficient(int order, double ka, const ImpedanceModel& bc);

struct MieSeries {
    cplx value;             ///< u^s(x)
    cplx radial_derivative; ///< d u^s / d|x - center|
    int n_max;
    double tail;            ///< magnitude of the last retained term pair
};

/// Separation-of-variables solution for a circle with constant boundary parameters:
///
///   u^s(x) = (i/4) sum_{n=-N}^{N} c_n H_n(k|x-c|) H_n(k|z-c|) e^{i n (theta_x - theta_z)},
///
/// N = ceil(ka + 4 (ka)^{1/3} + 20) unless given, extended until the tail is below 1e-14.
MieSeries mie_circle_oracle(double radius, const Point& center, double k, const ImpedanceModel& bc,
                            const Point& source, const Point& receiver,
                            std::optional<int> n_max = std::nullopt);

} // namespace bsl
