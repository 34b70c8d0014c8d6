#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "bsl/data_pipeline.hpp"
#include "bsl/error.hpp"

using namespace bsl;

namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "bsl_test_data_pipeline";
    fs::create_directories(dir);
    return dir / name;
}

MeasurementConfig small_config()
{
    MeasurementConfig c;
    c.n_sources = 4;
    c.k_min = 5.0;
    c.k_max = 6.0;
    c.dk = 0.5;
    return c;
}

} // namespace

TEST_CASE("measurement configuration")
{
    const MeasurementConfig paper;
    const auto ks = paper.wavenumbers();
    REQUIRE(ks.size() == 101);
    CHECK(ks.front() == 10.0);
    CHECK(ks.back() == doctest::Approx(30.0).epsilon(1e-14));
    for (std::size_t j = 1; j < ks.size(); ++j) {
        CHECK(ks[j] > ks[j - 1]);
    }
    const auto xs = paper.sources();
    REQUIRE(xs.size() == 32);
    CHECK((xs[8] - Point(0.0, 5.0)).norm() < 1e-14);
    for (const Point& x : xs) {
        CHECK(x.norm() == doctest::Approx(5.0).epsilon(1e-15));
    }
    // pi/(4R) = 0.157: the paper's step does not satisfy the range-resolution condition
    CHECK_FALSE(paper.resolves_range());
    MeasurementConfig fine = paper;
    fine.dk = 0.1;
    CHECK(fine.resolves_range());

    MeasurementConfig bad = paper;
    bad.dk = 0.3;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = paper;
    bad.k_min = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = paper;
    bad.n_sources = 0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("single entry equals a direct evaluation")
{
    const BoundaryCurve egg = egg::curve();
    MeasurementConfig c;
    c.n_sources = 1;
    c.k_min = c.k_max = 7.0;
    const ScatteringDataset ds = generate(egg, ImpedanceModel::neumann(), c);
    REQUIRE(ds.values.rows() == 1);
    REQUIRE(ds.values.cols() == 1);
    const auto sys = NystromSystem::assemble(egg, 7.0, ImpedanceModel::neumann(), default_quadrature_size(egg, 7.0));
    const Point x(5.0, 0.0);
    const cplx direct = sys.evaluate(sys.solve(x), x);
    CHECK(std::abs(ds.values(0, 0) - direct) <= 1e-12 * std::abs(direct));
    CHECK(ds.provenance == Provenance::Solver);
    CHECK_FALSE(ds.noisy);
}

TEST_CASE("generate preconditions and determinism")
{
    const BoundaryCurve big = BoundaryCurve::circle(6.0);
    CHECK_THROWS_AS(generate(big, ImpedanceModel::dirichlet(), small_config()), DomainError);

    const BoundaryCurve egg = egg::curve();
    const auto a = generate(egg, ImpedanceModel::robin_constant(2.0), small_config());
    const auto b = generate(egg, ImpedanceModel::robin_constant(2.0), small_config());
    CHECK(a.values == b.values);
    CHECK(a.values.allFinite());
}

TEST_CASE("engines agree at k = 30 on the circle")
{
    const BoundaryCurve c = BoundaryCurve::circle(1.0);
    MeasurementConfig cfg;
    cfg.n_sources = 6;
    cfg.k_min = cfg.k_max = 30.0;
    const auto solver = generate(c, ImpedanceModel::dirichlet(), cfg, Engine::Nystrom);
    const auto asym = generate(c, ImpedanceModel::dirichlet(), cfg, Engine::Asymptotic);
    CHECK(asym.provenance == Provenance::Asymptotic);
    for (Eigen::Index i = 0; i < solver.values.rows(); ++i) {
        CHECK(std::abs(asym.values(i, 0) - solver.values(i, 0)) <= 0.1 * std::abs(solver.values(i, 0)));
    }
}

TEST_CASE("noise model")
{
    const BoundaryCurve egg = egg::curve();
    const MeasurementConfig paper;
    const auto clean = generate(egg, ImpedanceModel::dirichlet(), paper, Engine::Asymptotic);

    SUBCASE("zero level is the identity")
    {
        const auto same = add_noise(clean, 0.0, 3);
        CHECK(same.values == clean.values);
        CHECK_FALSE(same.noisy);
    }
    SUBCASE("seeded and reproducible")
    {
        const auto a = add_noise(clean, 0.1, 42);
        const auto b = add_noise(clean, 0.1, 42);
        const auto c = add_noise(clean, 0.1, 43);
        CHECK(a.values == b.values);
        CHECK(a.values != c.values);
        CHECK(a.noisy);
        CHECK(a.config.seed == 42);
        CHECK_THROWS_AS(add_noise(clean, -0.1, 1), DomainError);
    }
    SUBCASE("statistics")
    {
        const double level = 0.10;
        const auto noisy = add_noise(clean, level, 2024);
        const auto n = static_cast<double>(clean.values.size());
        double mean_rel = 0.0, sum_re = 0.0, sum_im = 0.0, sq_re = 0.0, sq_im = 0.0;
        for (Eigen::Index i = 0; i < clean.values.rows(); ++i) {
            for (Eigen::Index j = 0; j < clean.values.cols(); ++j) {
                const cplx e = (noisy.values(i, j) - clean.values(i, j)) / std::abs(clean.values(i, j));
                mean_rel += std::abs(e) / n;
                sum_re += e.real();
                sum_im += e.imag();
                sq_re += e.real() * e.real();
                sq_im += e.imag() * e.imag();
            }
        }
        const double expected = level * std::sqrt(std::numbers::pi) / 2.0;
        CHECK(mean_rel == doctest::Approx(expected).epsilon(0.05));

        // standard deviation of each component is level/sqrt(2); the sample std has relative
        // standard error ~ 1/sqrt(2n)
        const double sigma = level / std::numbers::sqrt2;
        const double tol = 3.0 * sigma / std::sqrt(2.0 * n);
        CHECK(std::abs(std::sqrt(sq_re / n - (sum_re / n) * (sum_re / n)) - sigma) < tol);
        CHECK(std::abs(std::sqrt(sq_im / n - (sum_im / n) * (sum_im / n)) - sigma) < tol);
    }
    SUBCASE("Rayleigh mean by Monte Carlo")
    {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> normal;
        double sum = 0.0;
        const int draws = 1000000;
        for (int d = 0; d < draws; ++d) {
            const double xi = normal(rng), zeta = normal(rng);
            sum += std::hypot(xi, zeta) / std::numbers::sqrt2;
        }
        CHECK(sum / draws == doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(2e-3));
    }
}

TEST_CASE("boundary condition serialization")
{
    for (const auto& bc : {ImpedanceModel::dirichlet(), ImpedanceModel::neumann(), ImpedanceModel::robin_constant(0.5),
                           impedance_preset("3+sin(t)")}) {
        const ImpedanceModel back = impedance_from_json(impedance_to_json(bc));
        CHECK(back.kind() == bc.kind());
        CHECK(back.label() == bc.label());
        if (bc.kind() != BoundaryKind::Dirichlet) {
            CHECK(back.gamma(1.234) == bc.gamma(1.234));
        }
    }
    CHECK(impedance_preset("3+sin(t)").gamma(0.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(impedance_preset("nope"), DomainError);
    CHECK_THROWS_AS(impedance_from_json(nlohmann::json{{"kind", "soft"}}), ParseError);
}

TEST_CASE("save and load")
{
    const BoundaryCurve egg = egg::curve();
    const auto ds = add_noise(generate(egg, impedance_preset("3+sin(t)"), MeasurementConfig{}, Engine::Asymptotic),
                              0.1, 9);
    const fs::path path = temp_file("dataset.json");
    save(ds, path);
    const ScatteringDataset back = load(path);
    CHECK(back.values == ds.values);
    CHECK(back.noisy);
    CHECK(back.provenance == Provenance::File);
    CHECK(back.config.seed == 9);
    REQUIRE(back.truth.has_value());
    CHECK(curve_from_json(back.truth->at("curve")).coefficients() == egg.coefficients());
    CHECK(impedance_from_json(back.truth->at("bc")).label() == "3+sin(t)");

    SUBCASE("truncated file")
    {
        std::ifstream in(path);
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const fs::path cut = temp_file("truncated.json");
        std::ofstream(cut) << text.substr(0, text.size() / 2);
        CHECK_THROWS_AS(load(cut), ParseError);
    }
    SUBCASE("version mismatch")
    {
        nlohmann::json j = to_json(ds);
        j["format_version"] = 2;
        CHECK_THROWS_AS(dataset_from_json(j), ParseError);
    }
    SUBCASE("missing field is named")
    {
        nlohmann::json j = to_json(ds);
        j["config"].erase("dk");
        try {
            (void)dataset_from_json(j);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("config.dk") != std::string::npos);
        }
    }
    SUBCASE("wrong number of values")
    {
        nlohmann::json j = to_json(ds);
        j["values"].erase(0);
        CHECK_THROWS_AS(dataset_from_json(j), ParseError);
    }
    CHECK_THROWS_AS(load(temp_file("does_not_exist.json")), ParseError);
}

TEST_CASE("csv export")
{
    const auto ds = generate(BoundaryCurve::circle(1.0), ImpedanceModel::dirichlet(), small_config(), Engine::Asymptotic);
    const fs::path path = temp_file("dataset.csv");
    export_csv(ds, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "i,j,x_re,x_im,k,u_re,u_im");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
    }
    CHECK(rows == 4 * 3);
}
