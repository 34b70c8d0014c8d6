#include "bsl/recon_impedance.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <Eigen/Dense>

#include "bsl/error.hpp"
#include "bsl/parallel.hpp"

namespace bsl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI(0.0, 1.0);

double to_unit_interval(double theta) { return (theta - kPi) / kPi; }

} // namespace

cplx backscatter_geometric_factor(double distance, double hessian_det)
{
    if (!(hessian_det > 0.0)) {
        throw NumericalError("geometric factor: det H must be positive");
    }
    return -0.5 * std::exp(kI * (kPi / 4.0)) * std::sqrt(1.0 / (2.0 * kPi * distance * distance * hessian_det));
}

std::vector<SourceQuotient> recover_quotients(const ScatteringDataset& ds, const BoundaryCurve& curve)
{
    const std::vector<Point> xs = ds.config.sources();
    const std::vector<double> ks = ds.config.wavenumbers();
    if (ds.values.rows() != static_cast<Eigen::Index>(xs.size()) ||
        ds.values.cols() != static_cast<Eigen::Index>(ks.size())) {
        throw DomainError("recover_quotients: dataset dimensions do not match its configuration");
    }
    std::vector<SourceQuotient> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
        const PathLengthStationaryPoint sp = stationary_point(curve, xs[i], xs[i]);
        SourceQuotient& r = out[i];
        r.source = xs[i];
        r.closest = sp.point;
        r.distance = (sp.point.position - xs[i]).norm();
        r.hessian_det = sp.hessian_det;
        r.geometric_factor = backscatter_geometric_factor(r.distance, r.hessian_det);
        cplx sum = 0.0;
        for (std::size_t j = 0; j < ks.size(); ++j) {
            sum += std::sqrt(ks[j]) * std::exp(-2.0 * kI * ks[j] * r.distance) *
                   ds.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
        r.quotient = sum / (static_cast<double>(ks.size()) * r.geometric_factor);
    });
    return out;
}

double LegendreFit::operator()(double theta) const
{
    const double s = to_unit_interval(theta);
    double v = 0.0;
    for (std::size_t n = 0; n < coefficients.size(); ++n) {
        v += coefficients[n] * std::legendre(static_cast<unsigned>(n), s);
    }
    return v;
}

LegendreFit fit_legendre(const std::vector<double>& thetas, const std::vector<double>& values, int degree)
{
    if (thetas.size() != values.size() || thetas.empty()) {
        throw DomainError("fit_legendre: need matching, nonempty samples");
    }
    if (degree < 0 || static_cast<std::size_t>(degree) >= thetas.size()) {
        throw DomainError("fit_legendre: degree must be below the number of samples");
    }
    const auto rows = static_cast<Eigen::Index>(thetas.size());
    Eigen::MatrixXd a(rows, degree + 1);
    Eigen::VectorXd b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double s = to_unit_interval(thetas[static_cast<std::size_t>(r)]);
        for (int n = 0; n <= degree; ++n) {
            a(r, n) = std::legendre(static_cast<unsigned>(n), s);
        }
        b[r] = values[static_cast<std::size_t>(r)];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    return LegendreFit{std::vector<double>(c.data(), c.data() + c.size())};
}

ImpedanceRecovery recover_impedance(const std::vector<SourceQuotient>& quotients, double tau_q, int max_degree)
{
    if (!(tau_q > 0.0 && tau_q < 1.0)) {
        throw DomainError("recover_impedance: tau_q must lie in (0, 1)");
    }
    if (max_degree < 0) {
        throw DomainError("recover_impedance: max_degree must be non-negative");
    }
    ImpedanceRecovery rec;
    rec.tau_q = tau_q;
    std::vector<double> thetas, gammas;
    for (const SourceQuotient& q : quotients) {
        if (!std::isfinite(q.quotient.real()) || !std::isfinite(q.quotient.imag())) {
            throw DomainError("recover_impedance: quotient is not finite");
        }
        SourceImpedance s{q, BoundaryKind::Robin, std::nullopt};
        if (std::abs(q.quotient - 1.0) < tau_q) {
            s.classification = BoundaryKind::Dirichlet;
        } else if (std::abs(q.quotient + 1.0) < tau_q) {
            s.classification = BoundaryKind::Neumann;
        } else {
            const double re = q.quotient.real();
            s.gamma = (1.0 + re) / (1.0 - re);
            thetas.push_back(q.closest.theta);
            gammas.push_back(*s.gamma);
        }
        rec.sources.push_back(s);
    }
    if (!thetas.empty()) {
        int degree = max_degree;
        if (static_cast<std::size_t>(degree) >= thetas.size()) {
            degree = static_cast<int>(thetas.size()) - 1;
            rec.warnings.push_back("only " + std::to_string(thetas.size()) +
                                   " Robin-classified sources; Legendre degree reduced to " + std::to_string(degree));
        }
        rec.fit = fit_legendre(thetas, gammas, degree);
    }
    return rec;
}

nlohmann::json to_json(const ImpedanceRecovery& rec)
{
    nlohmann::json sources = nlohmann::json::array();
    for (const SourceImpedance& s : rec.sources) {
        const SourceQuotient& q = s.q;
        nlohmann::json j{{"source", {q.source.x(), q.source.y()}},
                         {"closest_point", {q.closest.position.x(), q.closest.position.y()}},
                         {"theta", q.closest.theta},
                         {"distance", q.distance},
                         {"hessian_det", q.hessian_det},
                         {"C", {q.geometric_factor.real(), q.geometric_factor.imag()}},
                         {"q", {q.quotient.real(), q.quotient.imag()}},
                         {"class", to_string(s.classification)}};
        j["gamma"] = s.gamma ? nlohmann::json(*s.gamma) : nlohmann::json(nullptr);
        sources.push_back(std::move(j));
    }
    nlohmann::json j{{"tau_q", rec.tau_q}, {"sources", std::move(sources)}, {"warnings", rec.warnings}};
    if (rec.fit) {
        j["legendre"] = {{"variable", "(theta - pi)/pi"}, {"coefficients", rec.fit->coefficients}};
    } else {
        j["legendre"] = nullptr;
    }
    return j;
}

void export_csv(const ImpedanceRecovery& rec, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.precision(12);
    out << "i,theta,q_re,q_im,class,gamma,gamma_fit\n";
    for (std::size_t i = 0; i < rec.sources.size(); ++i) {
        const SourceImpedance& s = rec.sources[i];
        out << i << ',' << s.q.closest.theta << ',' << s.q.quotient.real() << ',' << s.q.quotient.imag() << ','
            << to_string(s.classification) << ',';
        if (s.gamma) {
            out << *s.gamma;
        }
        out << ',';
        if (rec.fit) {
            out << (*rec.fit)(s.q.closest.theta);
        }
        out << '\n';
    }
}

} // namespace bsl
