#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsl/data_pipeline.hpp"

namespace bsl {

/// Quotient recovered from one source's multi-frequency backscatter on a fixed boundary.
struct SourceQuotient {
    Point source = Point::Zero();
    CurvePoint closest;         ///< y_i+
    double distance = 0.0;      ///< d_i = |x_i - y_i+|
    double hessian_det = 0.0;
    cplx geometric_factor;      ///< C_i
    cplx quotient;              ///< q_i
};

/// C = -(e^{i pi/4}/2) (1/(2 pi d^2 det H))^{1/2}, the k-free part of the backscatter amplitude.
cplx backscatter_geometric_factor(double distance, double hessian_det);

/// q_i = (1/n) sum_j k_j^{1/2} e^{-2 i k_j d_i} u^s(x_i; x_i, k_j) / C_i.
std::vector<SourceQuotient> recover_quotients(const ScatteringDataset& ds, const BoundaryCurve& curve);

/// Least-squares Legendre expansion in s = (theta - pi)/pi.
struct LegendreFit {
    std::vector<double> coefficients; ///< c_0..c_degree
    [[nodiscard]] int degree() const { return static_cast<int>(coefficients.size()) - 1; }
    [[nodiscard]] double operator()(double theta) const;
};

LegendreFit fit_legendre(const std::vector<double>& thetas, const std::vector<double>& values, int degree);

struct SourceImpedance {
    SourceQuotient q;
    BoundaryKind classification = BoundaryKind::Robin;
    std::optional<double> gamma; ///< (1 + Re q)/(1 - Re q) for Robin-classified sources
};

struct ImpedanceRecovery {
    std::vector<SourceImpedance> sources;
    double tau_q = 0.2;
    std::optional<LegendreFit> fit; ///< over the Robin-classified points, absent if there are none
    std::vector<std::string> warnings;
};

/// Classifies each quotient (|q - 1| < tau: Dirichlet, |q + 1| < tau: Neumann, else Robin),
/// inverts the Robin ones and fits gamma with a Legendre series of degree at most `max_degree`.
ImpedanceRecovery recover_impedance(const std::vector<SourceQuotient>& quotients, double tau_q = 0.2,
                                    int max_degree = 5);

nlohmann::json to_json(const ImpedanceRecovery& recovery);

/// Columns i, theta, q_re, q_im, class, gamma (empty unless Robin), gamma_fit.
void export_csv(const ImpedanceRecovery& recovery, const std::filesystem::path& path);

} // namespace bsl
