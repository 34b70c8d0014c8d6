#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bsl/asymptotics.hpp"
#include "bsl/error.hpp"

using namespace bsl;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

double relative_error(const BoundaryCurve& circle, const ImpedanceModel& bc, const Point& x, const Point& z, double k)
{
    const cplx ref = mie_circle_oracle(1.0, circle.center(), k, bc, z, x).value;
    return std::abs(predict_general(circle, bc, x, z, k).leading - ref) / std::abs(ref);
}

} // namespace

TEST_CASE("A_2 for backscatter from the unit circle")
{
    const BoundaryCurve c = BoundaryCurve::circle(1.0);
    const Point x(5.0, 0.0);
    for (double k : {1.0, 10.0, 40.0}) {
        const AsymptoticPrediction p = predict_backscatter(c, ImpedanceModel::dirichlet(), x, k);
        const double closed = std::sqrt(k / (2.0 * kPi * 16.0 * 2.5)) / (2.0 * k);
        CHECK(std::abs(p.amplitude) == doctest::Approx(closed).epsilon(1e-6));
        CHECK(std::abs(asymptotic_amplitude(k, 4.0, 4.0, 2.5)) == doctest::Approx(closed).epsilon(1e-12));
        CHECK(std::arg(p.amplitude) == doctest::Approx(kPi / 4.0).epsilon(1e-12));
    }
}

TEST_CASE("reflection quotients")
{
    const BoundaryCurve c = BoundaryCurve::circle(1.0);
    const Point x(4.0, 1.0);
    CHECK(predict_backscatter(c, ImpedanceModel::dirichlet(), x, 10.0).reflection == 1.0);
    CHECK(predict_backscatter(c, ImpedanceModel::neumann(), x, 10.0).reflection == -1.0);
    CHECK(predict_backscatter(c, ImpedanceModel::robin_constant(0.5), x, 10.0).reflection ==
          doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    const AsymptoticPrediction matched = predict_backscatter(c, ImpedanceModel::robin_constant(1.0), x, 10.0);
    CHECK(matched.reflection == 0.0);
    CHECK(std::abs(matched.leading) == 0.0);
    for (double g : {0.01, 0.3, 1.0, 7.0, 1e6}) {
        CHECK(std::abs(ImpedanceModel::robin_constant(g).quotient(0.0)) <= 1.0);
    }
}

TEST_CASE("coincident points reduce the general formula to backscatter")
{
    const BoundaryCurve egg = egg::curve();
    const Point x(-2.0, 3.5);
    const ImpedanceModel models[] = {ImpedanceModel::dirichlet(), ImpedanceModel::neumann(),
                                     ImpedanceModel::robin_constant(0.5), ImpedanceModel::robin_constant(4.0)};
    for (const auto& bc : models) {
        const cplx g = predict_general(egg, bc, x, x, 25.0).leading;
        const cplx b = predict_backscatter(egg, bc, x, 25.0).leading;
        CAPTURE(bc.label());
        CHECK(std::abs(g - b) <= 1e-9 * std::abs(b));
    }
}

TEST_CASE("backscatter phase is carried by e^{2ikd}")
{
    const BoundaryCurve egg = egg::curve();
    const Point x(3.0, 2.0);
    const double d = closest_point(egg, x).distance;
    const double ref = std::arg(predict_backscatter(egg, ImpedanceModel::dirichlet(), x, 10.0).leading *
                                std::exp(-2.0 * kI * 10.0 * d));
    for (double k : {13.7, 20.0, 55.5}) {
        const cplx p = predict_backscatter(egg, ImpedanceModel::dirichlet(), x, k).leading;
        CHECK(std::arg(p * std::exp(-2.0 * kI * k * d)) == doctest::Approx(ref).epsilon(1e-7));
    }
}

TEST_CASE("agreement with the circle series at high frequency")
{
    const BoundaryCurve c = BoundaryCurve::circle(1.0);
    CHECK(relative_error(c, ImpedanceModel::dirichlet(), Point(5, 0), Point(5, 0), 40.0) < 0.05);

    const ImpedanceModel models[] = {ImpedanceModel::dirichlet(), ImpedanceModel::neumann(),
                                     ImpedanceModel::robin_constant(0.5)};
    const std::pair<Point, Point> configs[] = {{Point(5, 0), Point(5, 0)}, {Point(3, 3), Point(5, -1)}};
    for (const auto& bc : models) {
        for (const auto& [x, z] : configs) {
            const double e20 = relative_error(c, bc, x, z, 20.0);
            const double e40 = relative_error(c, bc, x, z, 40.0);
            const double e80 = relative_error(c, bc, x, z, 80.0);
            CAPTURE(bc.label());
            CAPTURE(e20);
            CAPTURE(e40);
            CAPTURE(e80);
            CHECK(e40 < e20);
            CHECK(e80 < e40);
            CHECK(e40 / e20 >= 0.3);
            CHECK(e40 / e20 <= 0.8);
            CHECK(e80 / e40 >= 0.3);
            CHECK(e80 / e40 <= 0.8);
        }
    }
}

TEST_CASE("surrogate tracks the Nystrom solver on the egg")
{
    const BoundaryCurve egg = egg::curve();
    const auto bc = ImpedanceModel::robin([](double th) { return 3.0 + std::sin(egg::parameter_from_angle(th)); },
                                          "3+sin(t)");
    const double k = 40.0;
    const auto sys = NystromSystem::assemble(egg, k, bc, default_quadrature_size(egg, k));
    const Point z(5.0, 0.0);
    const Density d = sys.solve(z);
    for (const Point& x : {Point(5.0, 0.0), Point(3.5, 3.5), Point(4.0, -3.0)}) {
        const cplx ref = sys.evaluate(d, x);
        const cplx pred = predict_general(egg, bc, x, z, k).leading;
        CAPTURE(x.transpose());
        CHECK(std::abs(pred - ref) <= 0.1 * std::abs(ref));
    }
}

TEST_CASE("preconditions")
{
    const BoundaryCurve c = BoundaryCurve::circle(1.0);
    CHECK_THROWS_AS(predict_backscatter(c, ImpedanceModel::dirichlet(), Point(0.5, 0.0), 10.0), DomainError);
    CHECK_THROWS_AS(predict_backscatter(c, ImpedanceModel::dirichlet(), Point(3.0, 0.0), 0.0), DomainError);
    CHECK_THROWS_AS(predict_general(c, ImpedanceModel::dirichlet(), Point(3, 0), Point(-3, 0), 10.0), DomainError);
    CHECK_THROWS_AS(asymptotic_amplitude(10.0, 1.0, 1.0, 0.0), NumericalError);
}
