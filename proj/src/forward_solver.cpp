#include "bsl/forward_solver.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bsl/error.hpp"

namespace bsl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr cplx kI(0.0, 1.0);

// Below this reciprocal condition number the discrete system is treated as singular.
constexpr double kMinReciprocalCondition = 1e-12;
constexpr double kMaxResidual = 1e-10;

int round_up_even(double v)
{
    int n = static_cast<int>(std::ceil(v));
    return n + (n % 2);
}

std::string describe(double k, int n_quad)
{
    std::ostringstream os;
    os << "k = " << k << ", n_quad = " << n_quad;
    return os.str();
}

// Kress weights R_j for 2n nodes: R(m) = -(2 pi/n) sum_{l=1}^{n-1} cos(l m pi/n)/l - (pi/n^2)(-1)^m.
std::vector<double> kress_weights(int n)
{
    const int total = 2 * n;
    std::vector<double> w(static_cast<std::size_t>(total));
    for (int m = 0; m < total; ++m) {
        double sum = 0.0;
        for (int l = 1; l < n; ++l) {
            sum += std::cos(l * m * kPi / n) / l;
        }
        w[static_cast<std::size_t>(m)] = -(kTwoPi / n) * sum - (kPi / (n * static_cast<double>(n))) * ((m % 2 == 0) ? 1.0 : -1.0);
    }
    return w;
}

// Spectral differentiation on 2n equispaced periodic nodes.
Eigen::MatrixXd periodic_derivative(int total)
{
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(total, total);
    const double h = kTwoPi / total;
    for (int i = 0; i < total; ++i) {
        for (int j = 0; j < total; ++j) {
            if (i != j) {
                const int m = i - j;
                d(i, j) = 0.5 * ((m % 2 == 0) ? 1.0 : -1.0) / std::tan(0.5 * m * h);
            }
        }
    }
    return d;
}

cplx incident_field(const Point& y, const Point& z, double k)
{
    return kI * 0.25 * bessel_order01(k * (y - z).norm()).h0();
}

cplx reflection_coefficient(BoundaryKind kind, double gamma, double j, double jd, cplx h, cplx hd)
{
    switch (kind) {
    case BoundaryKind::Dirichlet:
        return -j / h;
    case BoundaryKind::Neumann:
        return -jd / hd;
    case BoundaryKind::Robin:
        break;
    }
    return -(jd + kI * gamma * j) / (hd + kI * gamma * h);
}

} // namespace

std::string to_string(BoundaryKind kind)
{
    switch (kind) {
    case BoundaryKind::Dirichlet:
        return "dirichlet";
    case BoundaryKind::Neumann:
        return "neumann";
    case BoundaryKind::Robin:
        return "robin";
    }
    return "unknown";
}

ImpedanceModel::ImpedanceModel(BoundaryKind kind, std::function<double(double)> gamma,
                               std::optional<double> constant, std::string label)
    : kind_(kind), gamma_(std::move(gamma)), constant_(constant), label_(std::move(label))
{
}

ImpedanceModel ImpedanceModel::dirichlet() { return {BoundaryKind::Dirichlet, nullptr, std::nullopt, "dirichlet"}; }

ImpedanceModel ImpedanceModel::neumann()
{
    return {BoundaryKind::Neumann, [](double) { return 0.0; }, 0.0, "neumann"};
}

ImpedanceModel ImpedanceModel::robin_constant(double gamma)
{
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DomainError("Robin impedance must be strictly positive, got " + std::to_string(gamma));
    }
    std::ostringstream label;
    label.precision(17);
    label << gamma;
    return {BoundaryKind::Robin, [gamma](double) { return gamma; }, gamma, label.str()};
}

ImpedanceModel ImpedanceModel::robin(std::function<double(double)> gamma, std::string label)
{
    if (!gamma) {
        throw DomainError("Robin impedance function is empty");
    }
    for (int i = 0; i < 1024; ++i) {
        const double theta = kTwoPi * i / 1024;
        const double g = gamma(theta);
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw DomainError("Robin impedance '" + label + "' is not strictly positive at theta = " +
                              std::to_string(theta));
        }
    }
    return {BoundaryKind::Robin, std::move(gamma), std::nullopt, std::move(label)};
}

double ImpedanceModel::gamma(double theta) const
{
    if (kind_ == BoundaryKind::Dirichlet) {
        throw DomainError("Dirichlet boundary has no finite impedance");
    }
    return gamma_(theta);
}

double ImpedanceModel::quotient(double theta) const
{
    switch (kind_) {
    case BoundaryKind::Dirichlet:
        return 1.0;
    case BoundaryKind::Neumann:
        return -1.0;
    case BoundaryKind::Robin:
        break;
    }
    const double g = gamma_(theta);
    return (g - 1.0) / (g + 1.0);
}

int minimum_quadrature_size(const BoundaryCurve& curve, double k)
{
    return round_up_even(8.0 * k * curve.perimeter() / kTwoPi);
}

int default_quadrature_size(const BoundaryCurve& curve, double k)
{
    return std::max(256, round_up_even(16.0 * k * curve.perimeter() / kTwoPi));
}

cplx incident_normal_derivative(const CurvePoint& y, const Point& z, double k)
{
    const Point diff = y.position - z;
    const double r = diff.norm();
    return -kI * k * 0.25 * bessel_order01(k * r).h1() * diff.dot(y.normal) / r;
}

NystromSystem::NystromSystem(const BoundaryCurve& curve, double k, ImpedanceModel bc)
    : projector_(curve), k_(k), bc_(std::move(bc))
{
}

NystromSystem NystromSystem::assemble(const BoundaryCurve& curve, double k, const ImpedanceModel& bc, int n_quad)
{
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw DomainError("assemble: wavenumber must be positive (" + describe(k, n_quad) + ")");
    }
    if (n_quad <= 0 || n_quad % 2 != 0) {
        throw DomainError("assemble: n_quad must be a positive even integer (" + describe(k, n_quad) + ")");
    }
    const int required = minimum_quadrature_size(curve, k);
    if (n_quad < required) {
        throw DomainError("assemble: n_quad below 8 points per wavelength, need at least " +
                          std::to_string(required) + " (" + describe(k, n_quad) + ")");
    }

    NystromSystem sys(curve, k, bc);
    const int total = n_quad;
    const int n = total / 2;
    const double w = kPi / n;
    const bool direct = bc.kind() != BoundaryKind::Dirichlet;

    sys.nodes_.reserve(static_cast<std::size_t>(total));
    std::vector<CurveDerivatives> derivs;
    derivs.reserve(static_cast<std::size_t>(total));
    for (int j = 0; j < total; ++j) {
        const double t = w * j;
        sys.nodes_.push_back(curve.eval(t));
        derivs.push_back(curve.derivatives(t));
        sys.gamma_.push_back(direct ? bc.gamma(t) : 0.0);
    }
    sys.node_spacing_ = curve.perimeter() / total;

    const std::vector<double> weights = kress_weights(n);
    std::vector<double> log_term(static_cast<std::size_t>(total), 0.0);
    for (int m = 1; m < total; ++m) {
        const double s = std::sin(0.5 * m * w);
        log_term[static_cast<std::size_t>(m)] = std::log(4.0 * s * s);
    }

    Eigen::MatrixXcd single(total, total);
    Eigen::MatrixXcd dbl(total, total);
    Eigen::MatrixXcd adj;
    Eigen::MatrixXcd single_nn;
    if (direct) {
        adj.resize(total, total);
        single_nn.resize(total, total);
    }

    const cplx quarter_i = 0.25 * kI;
    for (int i = 0; i < total; ++i) {
        const CurvePoint& xi = sys.nodes_[static_cast<std::size_t>(i)];
        const CurveDerivatives& di = derivs[static_cast<std::size_t>(i)];
        const double sp = xi.speed;
        // nu = (x2', -x1') is the unnormalized outward normal; x''.nu / |x'|^2 gives the diagonal
        // limit of both double-layer kernels.
        const double curvature_term = (di.second.x() * di.first.y() - di.second.y() * di.first.x()) /
                                      (4.0 * kPi * sp * sp);
        const cplx s_diag = (quarter_i - (std::numbers::egamma + std::log(0.5 * k * sp)) / kTwoPi) * sp;
        const double s_log = -sp / (4.0 * kPi);
        single(i, i) = weights[0] * s_log + w * s_diag;
        dbl(i, i) = w * curvature_term;
        if (direct) {
            adj(i, i) = w * curvature_term;
            single_nn(i, i) = single(i, i);
        }

        for (int j = i + 1; j < total; ++j) {
            const CurvePoint& yj = sys.nodes_[static_cast<std::size_t>(j)];
            const Point diff = xi.position - yj.position; // x_i - x_j
            const double r = diff.norm();
            const BesselOrder01 b = bessel_order01(k * r);
            const cplx h0 = b.h0();
            const cplx h1 = b.h1();
            const int m = j - i;
            const double rw = weights[static_cast<std::size_t>(m)];
            const double lg = log_term[static_cast<std::size_t>(m)];
            auto entry = [&](cplx full, double log_coeff) { return rw * log_coeff + w * (full - log_coeff * lg); };

            // single layer (i/4) H0 |x'|, log part -J0 |x'| / (4 pi)
            single(i, j) = entry(quarter_i * h0 * yj.speed, -b.j0 * yj.speed / (4.0 * kPi));
            single(j, i) = entry(quarter_i * h0 * sp, -b.j0 * sp / (4.0 * kPi));

            // double layer dPhi/dn_y |x'|: (ik/4) H1(kr)/r (x - y).n_y |x'|
            const double proj_j = diff.dot(yj.normal) * yj.speed;  // (x_i - x_j).n_j |x_j'|
            const double proj_i = -diff.dot(xi.normal) * sp;       // (x_j - x_i).n_i |x_i'|
            const cplx dl_scale = kI * k * 0.25 * h1 / r;
            const double dl_log = -k / (4.0 * kPi) * b.j1 / r;
            dbl(i, j) = entry(dl_scale * proj_j, dl_log * proj_j);
            dbl(j, i) = entry(dl_scale * proj_i, dl_log * proj_i);

            if (direct) {
                // adjoint double layer dPhi/dn_x |x'|: -(ik/4) H1(kr)/r (x - y).n_x |y'|
                const double aproj_ij = diff.dot(xi.normal) * yj.speed;
                const double aproj_ji = -diff.dot(yj.normal) * sp;
                adj(i, j) = entry(-dl_scale * aproj_ij, -dl_log * aproj_ij);
                adj(j, i) = entry(-dl_scale * aproj_ji, -dl_log * aproj_ji);

                const double nn = xi.normal.dot(yj.normal);
                single_nn(i, j) = entry(quarter_i * h0 * nn * yj.speed, -b.j0 * nn * yj.speed / (4.0 * kPi));
                single_nn(j, i) = entry(quarter_i * h0 * nn * sp, -b.j0 * nn * sp / (4.0 * kPi));
            }
        }
    }

    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(total, total);
    if (!direct) {
        sys.matrix_ = 0.5 * identity + dbl - kI * k * single;
    } else {
        // Maue form of the hypersingular operator: T = (1/|x'|) D S (1/|y'|) D + k^2 S_nn.
        Eigen::VectorXd inv_speed(total);
        for (int j = 0; j < total; ++j) {
            inv_speed[j] = 1.0 / sys.nodes_[static_cast<std::size_t>(j)].speed;
        }
        const Eigen::MatrixXcd deriv = (inv_speed.asDiagonal() * periodic_derivative(total)).cast<cplx>();
        const Eigen::MatrixXcd hyper = deriv * (single * deriv) + (k * k) * single_nn;

        Eigen::VectorXcd gamma(total);
        for (int j = 0; j < total; ++j) {
            gamma[j] = sys.gamma_[static_cast<std::size_t>(j)];
        }
        const cplx coupling = kI / k;
        sys.matrix_ = 0.5 * identity - dbl - kI * k * (single * gamma.asDiagonal()) +
                      coupling * (-0.5 * kI * k * Eigen::MatrixXcd(gamma.asDiagonal()) -
                                  kI * k * (adj * gamma.asDiagonal()) - hyper);
        sys.single_layer_ = std::move(single);
        sys.adjoint_double_ = std::move(adj);
    }

    sys.lu_.compute(sys.matrix_);
    sys.rcond_ = sys.lu_.rcond();
    if (!(sys.rcond_ > kMinReciprocalCondition)) {
        throw NumericalError("assemble: boundary integral system is numerically singular (condition estimate " +
                             std::to_string(1.0 / sys.rcond_) + ", " + describe(k, n_quad) + ")");
    }
    return sys;
}

Eigen::VectorXcd NystromSystem::right_hand_side(const Point& source) const
{
    const auto total = static_cast<Eigen::Index>(nodes_.size());
    Eigen::VectorXcd rhs(total);
    if (bc_.kind() == BoundaryKind::Dirichlet) {
        for (Eigen::Index j = 0; j < total; ++j) {
            rhs[j] = -incident_field(nodes_[static_cast<std::size_t>(j)].position, source, k_);
        }
        return rhs;
    }
    Eigen::VectorXcd g(total);
    for (Eigen::Index j = 0; j < total; ++j) {
        const CurvePoint& y = nodes_[static_cast<std::size_t>(j)];
        g[j] = incident_normal_derivative(y, source, k_) +
               kI * k_ * gamma_[static_cast<std::size_t>(j)] * incident_field(y.position, source, k_);
    }
    const cplx coupling = kI / k_;
    rhs = single_layer_ * g + coupling * (0.5 * g + adjoint_double_ * g);
    return rhs;
}

Density NystromSystem::finish(const Point& source, const Eigen::VectorXcd& rhs, Eigen::VectorXcd solution) const
{
    Density d;
    d.source = source;
    const double rhs_norm = rhs.norm();
    d.residual = rhs_norm > 0.0 ? (matrix_ * solution - rhs).norm() / rhs_norm : 0.0;
    if (!(d.residual < kMaxResidual)) {
        throw NumericalError("solve: linear residual " + std::to_string(d.residual) + " exceeds tolerance (" +
                             describe(k_, size()) + ")");
    }
    d.values.assign(solution.data(), solution.data() + solution.size());
    if (bc_.kind() != BoundaryKind::Dirichlet) {
        d.flux.resize(d.values.size());
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            const CurvePoint& y = nodes_[j];
            const cplx g = incident_normal_derivative(y, source, k_) +
                           kI * k_ * gamma_[j] * incident_field(y.position, source, k_);
            d.flux[j] = -kI * k_ * gamma_[j] * d.values[j] - g;
        }
    }
    return d;
}

Density NystromSystem::solve(const Point& source) const
{
    if (!curve().strictly_outside(source)) {
        throw DomainError("solve: source must lie strictly outside the obstacle");
    }
    const Eigen::VectorXcd rhs = right_hand_side(source);
    return finish(source, rhs, lu_.solve(rhs));
}

std::vector<Density> NystromSystem::solve(std::span<const Point> sources) const
{
    const auto total = static_cast<Eigen::Index>(nodes_.size());
    Eigen::MatrixXcd rhs(total, static_cast<Eigen::Index>(sources.size()));
    for (std::size_t s = 0; s < sources.size(); ++s) {
        if (!curve().strictly_outside(sources[s])) {
            throw DomainError("solve: source " + std::to_string(s) + " must lie strictly outside the obstacle");
        }
        rhs.col(static_cast<Eigen::Index>(s)) = right_hand_side(sources[s]);
    }
    const Eigen::MatrixXcd sol = lu_.solve(rhs);
    std::vector<Density> out;
    out.reserve(sources.size());
    for (std::size_t s = 0; s < sources.size(); ++s) {
        const auto c = static_cast<Eigen::Index>(s);
        out.push_back(finish(sources[s], rhs.col(c), sol.col(c)));
    }
    return out;
}

cplx NystromSystem::evaluate(const Density& density, const Point& x) const
{
    if (density.values.size() != nodes_.size()) {
        throw DomainError("evaluate: density does not belong to this system");
    }
    const ClosestPoint near = projector_.closest(x);
    if (near.distance <= 3.0 * node_spacing_) {
        throw DomainError("evaluate: point is within three node spacings of the boundary; "
                          "near-boundary evaluation is not supported");
    }
    const double w = kTwoPi / static_cast<double>(nodes_.size());
    const bool direct = bc_.kind() != BoundaryKind::Dirichlet;
    cplx sum = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        const CurvePoint& y = nodes_[j];
        const Point diff = x - y.position;
        const double r = diff.norm();
        const BesselOrder01 b = bessel_order01(k_ * r);
        const cplx green = 0.25 * kI * b.h0();
        const cplx dgreen = 0.25 * kI * k_ * b.h1() * diff.dot(y.normal) / r; // dPhi(x,y)/dn_y
        if (direct) {
            sum += (density.values[j] * dgreen - density.flux[j] * green) * y.speed;
        } else {
            sum += (dgreen - kI * k_ * green) * density.values[j] * y.speed;
        }
    }
    return w * sum;
}

BoundaryTrace NystromSystem::trace_at(const Density& density, double theta) const
{
    if (bc_.kind() == BoundaryKind::Dirichlet) {
        throw DomainError("trace_at: only available for Neumann/Robin systems");
    }
    const std::size_t total = nodes_.size();
    const double h = kTwoPi / static_cast<double>(total);
    BoundaryTrace out{0.0, 0.0};
    for (std::size_t j = 0; j < total; ++j) {
        const double delta = theta - h * static_cast<double>(j);
        const double half = 0.5 * delta;
        double basis;
        if (std::abs(std::sin(half)) < 1e-14) {
            basis = std::cos(static_cast<double>(total) * half) / std::cos(half);
        } else {
            basis = std::sin(static_cast<double>(total) * half) / std::tan(half) / static_cast<double>(total);
        }
        out.value += basis * density.values[j];
        out.normal_derivative += basis * density.flux[j];
    }
    return out;
}

cplx scattered_field(const BoundaryCurve& curve, const ImpedanceModel& bc, double k, const Point& z, const Point& x)
{
    const NystromSystem sys = NystromSystem::assemble(curve, k, bc, default_quadrature_size(curve, k));
    return sys.evaluate(sys.solve(z), x);
}

cplx mie_reflection_coefficient(int order, double ka, const ImpedanceModel& bc)
{
    if (bc.kind() == BoundaryKind::Robin && !bc.constant_gamma()) {
        throw DomainError("mie_reflection_coefficient: only constant impedance is supported");
    }
    const int n = std::abs(order);
    const double j = bessel_j(n, ka);
    const cplx h = hankel1(n, ka);
    return reflection_coefficient(bc.kind(), bc.constant_gamma().value_or(0.0), j, bessel_j_derivative(n, ka), h,
                                  hankel1_derivative(n, ka));
}

MieSeries mie_circle_oracle(double radius, const Point& center, double k, const ImpedanceModel& bc,
                            const Point& source, const Point& receiver, std::optional<int> n_max)
{
    if (!(radius > 0.0) || !(k > 0.0)) {
        throw DomainError("mie_circle_oracle: radius and wavenumber must be positive");
    }
    if (bc.kind() == BoundaryKind::Robin && !bc.constant_gamma()) {
        throw DomainError("mie_circle_oracle: only constant impedance is supported");
    }
    const double rz = (source - center).norm();
    const double rx = (receiver - center).norm();
    if (rz <= radius || rx < radius) {
        throw DomainError("mie_circle_oracle: source and receiver must lie outside the circle");
    }
    const double ka = k * radius;
    int order = n_max ? *n_max : static_cast<int>(std::ceil(ka + 4.0 * std::cbrt(ka) + 20.0));
    const double gamma = bc.constant_gamma().value_or(0.0);
    const double dphi = std::atan2((receiver - center).y(), (receiver - center).x()) -
                        std::atan2((source - center).y(), (source - center).x());

    for (;;) {
        const auto len = static_cast<std::size_t>(order + 2);
        std::vector<double> ja(len), ya(len), jx(len), yx(len), jz(len), yz(len);
        bessel_j_sequence(ka, ja);
        bessel_y_sequence(ka, ya);
        bessel_j_sequence(k * rx, jx);
        bessel_y_sequence(k * rx, yx);
        bessel_j_sequence(k * rz, jz);
        bessel_y_sequence(k * rz, yz);

        cplx sum = 0.0;
        cplx dsum = 0.0;
        double last = 0.0;
        for (int nn = 0; nn <= order; ++nn) {
            const auto u = static_cast<std::size_t>(nn);
            const cplx ha(ja[u], ya[u]);
            // derivatives via (f_{n-1} - f_{n+1})/2 with f_{-1} = -f_1
            const double jd = nn == 0 ? -ja[1] : 0.5 * (ja[u - 1] - ja[u + 1]);
            const cplx hd = nn == 0 ? cplx(-ja[1], -ya[1]) : 0.5 * (cplx(ja[u - 1], ya[u - 1]) - cplx(ja[u + 1], ya[u + 1]));
            cplx c = reflection_coefficient(bc.kind(), gamma, ja[u], jd, ha, hd);
            if (!std::isfinite(std::abs(c))) {
                c = 0.0;
            }
            const cplx hx(jx[u], yx[u]);
            const cplx hxd = nn == 0 ? cplx(-jx[1], -yx[1]) : 0.5 * (cplx(jx[u - 1], yx[u - 1]) - cplx(jx[u + 1], yx[u + 1]));
            const cplx hz(jz[u], yz[u]);
            const double mult = nn == 0 ? 1.0 : 2.0 * std::cos(nn * dphi);
            const cplx term = c * hx * hz * mult;
            const cplx dterm = c * k * hxd * hz * mult;
            sum += term;
            dsum += dterm;
            last = std::abs(c * hx * hz) * (nn == 0 ? 1.0 : 2.0);
        }
        const double tail = 0.25 * last;
        if (tail < 1e-14) {
            return {0.25 * kI * sum, 0.25 * kI * dsum, order, tail};
        }
        if (order >= kMaxBesselOrder) {
            throw NumericalError("mie_circle_oracle: series did not converge by order " + std::to_string(order));
        }
        order = std::min(kMaxBesselOrder, order + 10);
    }
}

} // namespace bsl
