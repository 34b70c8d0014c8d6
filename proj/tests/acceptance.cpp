// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 once the suite has run;
// pass --strict to make it the number of failed criteria instead.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "bsl/asymptotics.hpp"
#include "bsl/error.hpp"
#include "bsl/experiment.hpp"

namespace fs = std::filesystem;
using namespace bsl;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kNoiseSeed = 20240601;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v, int precision = 3)
{
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

// Paper-default egg datasets with 10% noise, cached on disk together with their generation time.
class EggData {
public:
    explicit EggData(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    struct Entry {
        ScatteringDataset data;
        double generation_seconds;
    };

    const Entry& get(const std::string& name)
    {
        auto it = cache_.find(name);
        if (it != cache_.end()) {
            return it->second;
        }
        const fs::path file = dir_ / ("egg_" + name + ".json");
        const fs::path time_file = dir_ / ("egg_" + name + ".seconds");
        Entry e{ScatteringDataset{}, 0.0};
        if (fs::exists(file) && fs::exists(time_file)) {
            e.data = load(file);
            std::ifstream(time_file) >> e.generation_seconds;
        } else {
            const auto t0 = Clock::now();
            e.data = add_noise(generate(egg::curve(), model(name), MeasurementConfig{}), 0.10, kNoiseSeed);
            e.generation_seconds = seconds_since(t0);
            save(e.data, file);
            std::ofstream(time_file) << std::setprecision(17) << e.generation_seconds << '\n';
            e.data = load(file); // identical path for cached and fresh runs
        }
        return cache_.emplace(name, std::move(e)).first->second;
    }

    static ImpedanceModel model(const std::string& name)
    {
        if (name == "dirichlet") {
            return ImpedanceModel::dirichlet();
        }
        if (name == "neumann") {
            return ImpedanceModel::neumann();
        }
        if (name == "robin") {
            return ImpedanceModel::robin_constant(0.5);
        }
        return impedance_preset("3+sin(t)");
    }

private:
    fs::path dir_;
    std::map<std::string, Entry> cache_;
};

std::vector<ImpedanceModel> circle_conditions()
{
    return {ImpedanceModel::dirichlet(), ImpedanceModel::neumann(), ImpedanceModel::robin_constant(0.5)};
}

Outcome criterion_forward()
{
    const auto t0 = Clock::now();
    const BoundaryCurve circle = BoundaryCurve::circle(1.0);
    std::vector<Point> points{Point(5.0, 0.0)};
    for (int i = 0; i < 15; ++i) {
        const double t = 2.0 * kPi * (i + 0.5) / 15.0;
        const double r = 1.5 + 0.25 * i;
        points.emplace_back(r * std::cos(t), r * std::sin(t));
    }
    double worst = 0.0;
    for (double k : {5.0, 10.0, 20.0}) {
        for (const auto& bc : circle_conditions()) {
            const auto sys = NystromSystem::assemble(circle, k, bc, std::max(256, static_cast<int>(16.0 * k)));
            const auto densities = sys.solve(points);
            for (std::size_t i = 0; i < points.size(); ++i) {
                const cplx ref = mie_circle_oracle(1.0, Point::Zero(), k, bc, points[i], points[i]).value;
                worst = std::max(worst, std::abs(sys.evaluate(densities[i], points[i]) - ref) / std::abs(ref));
            }
        }
    }
    const double elapsed = seconds_since(t0);
    return {worst < 1e-5 && elapsed < 30.0,
            "max relative error vs circle series " + fmt(worst) + " (< 1e-5), " + fmt(elapsed) + " s (< 30 s)"};
}

Outcome criterion_asymptotic()
{
    const auto t0 = Clock::now();
    const BoundaryCurve circle = BoundaryCurve::circle(1.0);
    const Point x(5.0, 0.0);
    bool ok = true;
    std::string detail;
    for (const auto& bc : circle_conditions()) {
        std::vector<double> errs;
        for (double k : {20.0, 40.0, 80.0}) {
            const cplx ref = mie_circle_oracle(1.0, Point::Zero(), k, bc, x, x).value;
            errs.push_back(std::abs(predict_backscatter(circle, bc, x, k).leading - ref) / std::abs(ref));
        }
        const double r1 = errs[1] / errs[0];
        const double r2 = errs[2] / errs[1];
        ok = ok && errs[1] < errs[0] && errs[2] < errs[1] && r1 >= 0.3 && r1 <= 0.8 && r2 >= 0.3 && r2 <= 0.8;
        detail += bc.label() + " errors " + fmt(errs[0]) + "/" + fmt(errs[1]) + "/" + fmt(errs[2]) + " ratios " +
                  fmt(r1, 2) + "," + fmt(r2, 2) + "; ";
    }
    const double elapsed = seconds_since(t0);
    return {ok && elapsed < 60.0, detail + fmt(elapsed) + " s (< 60 s)"};
}

Outcome criterion_round_trip()
{
    const BoundaryCurve egg = egg::curve();
    double worst = 0.0;
    for (double gamma : {0.5, 2.0, 5.0}) {
        const auto ds = generate(egg, ImpedanceModel::robin_constant(gamma), MeasurementConfig{}, Engine::Asymptotic);
        for (const auto& s : recover_impedance(recover_quotients(ds, egg)).sources) {
            worst = std::max(worst, s.gamma ? std::abs(*s.gamma - gamma) / gamma : 1.0);
        }
    }
    return {worst < 1e-10, "max relative gamma error " + fmt(worst) + " (< 1e-10)"};
}

Outcome criterion_classification(EggData& data)
{
    bool ok = true;
    std::string detail;
    const BoundaryCurve egg = egg::curve();
    for (const std::string name : {"dirichlet", "neumann"}) {
        const auto t0 = Clock::now();
        const auto& entry = data.get(name);
        const double target = name == "dirichlet" ? 1.0 : -1.0;
        const BoundaryKind kind = name == "dirichlet" ? BoundaryKind::Dirichlet : BoundaryKind::Neumann;

        const ImpedanceRecovery ideal = recover_impedance(recover_quotients(entry.data, egg));
        int correct = 0;
        double mean = 0.0;
        for (const auto& s : ideal.sources) {
            correct += s.classification == kind;
            mean += std::abs(s.q.quotient - target) / static_cast<double>(ideal.sources.size());
        }
        const double elapsed = seconds_since(t0) + entry.generation_seconds;
        ok = ok && correct == 32 && mean < 0.15 && elapsed < 300.0;

        // diagnostic: the same step on the reconstructed boundary
        const ReconstructionResult rec = reconstruct(entry.data);
        int correct_opt = 0;
        double mean_opt = 0.0;
        for (const auto& s : rec.recovery.sources) {
            correct_opt += s.classification == kind;
            mean_opt += std::abs(s.q.quotient - target) / static_cast<double>(rec.recovery.sources.size());
        }
        detail += name + ": " + std::to_string(correct) + "/32, mean |q-" + (target > 0 ? "1" : "(-1)") + "| " +
                  fmt(mean) + " (< 0.15), " + fmt(elapsed) + " s [optimized boundary: " +
                  std::to_string(correct_opt) + "/32, mean " + fmt(mean_opt) + "]; ";
    }
    return {ok, detail + "true boundary"};
}

Outcome criterion_shape(EggData& data)
{
    bool ok = true;
    std::string detail;
    for (const std::string name : {"dirichlet", "neumann", "robin", "variable"}) {
        const auto t0 = Clock::now();
        const auto& entry = data.get(name);
        const ReconstructionResult rec = reconstruct(entry.data);
        const double h = hausdorff_distance(rec.boundary, egg::curve());
        const double elapsed = seconds_since(t0) + entry.generation_seconds;
        ok = ok && h < 0.1 && elapsed < 600.0;
        detail += name + " " + fmt(h) + " (" + fmt(elapsed) + " s); ";
    }
    return {ok, "Hausdorff distance (< 0.1, < 600 s each): " + detail};
}

Outcome criterion_variable_impedance(EggData& data)
{
    const auto& entry = data.get("variable");
    const BoundaryCurve egg = egg::curve();
    const ImpedanceModel truth = impedance_preset("3+sin(t)");
    auto score = [&](const ReconstructionResult& rec) {
        double worst = 0.0;
        int n = 0;
        for (const auto& s : rec.recovery.sources) {
            if (s.classification != BoundaryKind::Robin || !rec.recovery.fit || std::abs(s.q.quotient) >= 0.8) {
                continue;
            }
            const double g = truth.gamma(egg.polar_angle(s.q.closest.position));
            worst = std::max(worst, std::abs((*rec.recovery.fit)(s.q.closest.theta) - g) / g);
            ++n;
        }
        return std::make_pair(worst, n);
    };
    const auto [ideal, n_ideal] = score(reconstruct(entry.data, {}, egg));
    const auto [optimized, n_opt] = score(reconstruct(entry.data));
    const bool ok = n_ideal > 0 && n_opt > 0 && ideal < 0.10 && optimized < 0.20;
    return {ok, "max relative error of fitted gamma: true boundary " + fmt(ideal) + " over " + std::to_string(n_ideal) +
                    " points (< 0.10); optimized boundary " + fmt(optimized) + " over " + std::to_string(n_opt) +
                    " points (< 0.20)"};
}

Outcome criterion_noise()
{
    MeasurementConfig cfg;
    const auto clean = generate(egg::curve(), ImpedanceModel::dirichlet(), cfg, Engine::Asymptotic);
    const auto noisy = add_noise(clean, 0.10, kNoiseSeed);
    double mean = 0.0;
    const auto n = static_cast<double>(clean.values.size());
    for (Eigen::Index i = 0; i < clean.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < clean.values.cols(); ++j) {
            mean += std::abs(noisy.values(i, j) - clean.values(i, j)) / std::abs(clean.values(i, j)) / n;
        }
    }
    const double expected = 0.10 * std::sqrt(kPi) / 2.0;
    const double rel = std::abs(mean - expected) / expected;
    return {rel < 0.05 && clean.values.size() >= 3000,
            "mean relative perturbation " + fmt(mean, 5) + " vs " + fmt(expected, 5) + " over " +
                std::to_string(clean.values.size()) + " entries (deviation " + fmt(rel) + " < 0.05)"};
}

Outcome criterion_invariants()
{
    std::vector<std::string> failed;
    std::mt19937_64 rng(8);

    // Wronskian
    {
        std::uniform_real_distribution<double> lx(std::log(0.1), std::log(100.0));
        bool ok = true;
        for (int t = 0; t < 200; ++t) {
            const double x = std::exp(lx(rng));
            for (int n : {0, 1, 2, 5, 10, 30}) {
                const double w = bessel_j(n, x) * bessel_y(n + 1, x) - bessel_j(n + 1, x) * bessel_y(n, x);
                ok = ok && std::abs(w + 2.0 / (kPi * x)) <= 1e-10 * 2.0 / (kPi * x);
            }
        }
        if (!ok) {
            failed.push_back("Wronskian");
        }
    }
    // reciprocity
    {
        const BoundaryCurve egg = egg::curve();
        std::uniform_real_distribution<double> rad(2.0, 6.0), ang(0.0, 2.0 * kPi);
        bool ok = true;
        for (const auto& bc : circle_conditions()) {
            const auto sys = NystromSystem::assemble(egg, 10.0, bc, default_quadrature_size(egg, 10.0));
            for (int t = 0; t < 10; ++t) {
                const double r1 = rad(rng), a1 = ang(rng), r2 = rad(rng), a2 = ang(rng);
                const Point p(r1 * std::cos(a1), r1 * std::sin(a1)), q(r2 * std::cos(a2), r2 * std::sin(a2));
                const cplx pq = sys.evaluate(sys.solve(q), p), qp = sys.evaluate(sys.solve(p), q);
                ok = ok && std::abs(pq - qp) <= 1e-8 * std::abs(pq);
            }
        }
        if (!ok) {
            failed.push_back("reciprocity");
        }
    }
    // normalization invariance of the total indicator
    {
        MeasurementConfig cfg;
        const auto ds = generate(egg::curve(), ImpedanceModel::robin_constant(2.0), cfg, Engine::Asymptotic);
        ScatteringDataset scaled = ds;
        for (Eigen::Index i = 0; i < scaled.values.rows(); ++i) {
            scaled.values.row(i) *= std::polar(std::pow(10.0, (i % 5) - 2.0), 0.3 * i);
        }
        const ImagingGrid grid = ImagingGrid::square(3.0, 61);
        const IndicatorField a = indicator_total(ds, grid), b = indicator_total(scaled, grid);
        bool ok = true;
        for (std::size_t p = 0; p < a.total.size(); ++p) {
            ok = ok && std::abs(a.total[p] - b.total[p]) <= 1e-12 * a.max_total();
        }
        if (!ok) {
            failed.push_back("indicator normalization");
        }
    }
    // objective gradient vs central differences
    {
        std::uniform_real_distribution<double> coef(-0.08, 0.08);
        std::normal_distribution<double> noise(0.0, 0.1);
        std::vector<Point> pts;
        for (const Point& p : egg::samples(150)) {
            pts.push_back(p + Point(noise(rng), noise(rng)));
        }
        bool ok = true;
        for (int s = 0; s < 5; ++s) {
            std::vector<double> c(17);
            c[0] = 1.2 + 0.1 * s;
            for (std::size_t i = 1; i < c.size(); ++i) {
                c[i] = coef(rng);
            }
            std::vector<double> grad;
            shape_objective(BoundaryCurve::from_coefficients(c, Point::Zero()), pts, 100.0, 1.0, &grad);
            for (std::size_t i = 0; i < c.size(); ++i) {
                auto plus = c, minus = c;
                plus[i] += 1e-6;
                minus[i] -= 1e-6;
                const double fd =
                    (shape_objective(BoundaryCurve::from_coefficients(plus, Point::Zero()), pts, 100.0, 1.0) -
                     shape_objective(BoundaryCurve::from_coefficients(minus, Point::Zero()), pts, 100.0, 1.0)) /
                    2e-6;
                ok = ok && std::abs(grad[i] - fd) <= 1e-5 * std::max(std::abs(fd), 1e-3);
            }
        }
        if (!ok) {
            failed.push_back("objective gradient");
        }
    }
    // unique stationary point on random convex configurations
    {
        std::uniform_real_distribution<double> coef(-0.04, 0.04), shift(-0.5, 0.5), ang(0.0, 2.0 * kPi),
            spread(-1.2, 1.2), rad(2.5, 6.0);
        int tested = 0;
        bool ok = true;
        while (tested < 100) {
            std::vector<double> a(4), b(4);
            for (int m = 0; m < 4; ++m) {
                a[m] = coef(rng) / (m + 1);
                b[m] = coef(rng) / (m + 1);
            }
            const BoundaryCurve curve(1.0, a, b, Point(shift(rng), shift(rng)));
            const double ax = ang(rng), az = ax + spread(rng);
            const Point x = curve.center() + rad(rng) * Point(std::cos(ax), std::sin(ax));
            const Point z = curve.center() + rad(rng) * Point(std::cos(az), std::sin(az));
            const int n = 4096;
            std::vector<double> psi(n);
            std::vector<char> lit(n);
            for (int i = 0; i < n; ++i) {
                const CurvePoint y = curve.eval(2.0 * kPi * i / n);
                lit[i] = is_illuminated(y, x, z);
                psi[i] = (x - y.position).norm() + (y.position - z).norm();
            }
            if (std::none_of(lit.begin(), lit.end(), [](char c) { return c != 0; })) {
                continue;
            }
            int minima = 0;
            for (int i = 0; i < n; ++i) {
                const int l = (i + n - 1) % n, r = (i + 1) % n;
                minima += lit[i] && lit[l] && lit[r] && psi[i] < psi[l] && psi[i] <= psi[r];
            }
            try {
                (void)stationary_point(curve, x, z);
            } catch (const std::exception&) {
                ok = false;
            }
            ok = ok && minima == 1;
            ++tested;
        }
        if (!ok) {
            failed.push_back("stationary-point uniqueness");
        }
    }
    std::string detail = "Wronskian, reciprocity, indicator normalization, objective gradient, stationary-point "
                         "uniqueness (100 configurations); per-module property suites run under ctest";
    if (!failed.empty()) {
        detail = "failed:";
        for (const auto& f : failed) {
            detail += " " + f;
        }
    }
    return {failed.empty(), detail};
}

} // namespace

int main(int argc, char** argv)
{
    bool strict = false;
    fs::path cache = "acceptance_cache";
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--strict") == 0) {
            strict = true;
        } else if (std::strcmp(argv[i], "--cache") == 0 && i + 1 < argc) {
            cache = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--strict] [--cache DIR]\n";
            return 1;
        }
    }
    EggData data(cache);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"forward-solver oracle equivalence", criterion_forward},
        {"asymptotic backscatter convergence", criterion_asymptotic},
        {"quotient round trip", criterion_round_trip},
        {"boundary-type classification", [&] { return criterion_classification(data); }},
        {"shape reconstruction", [&] { return criterion_shape(data); }},
        {"variable impedance", [&] { return criterion_variable_impedance(data); }},
        {"noise model", criterion_noise},
        {"invariant suites", criterion_invariants},
    };

    int failures = 0;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        Outcome o;
        try {
            o = criteria[c].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (c + 1) << " (" << criteria[c].first
                  << "): " << o.detail << std::endl;
    }
    std::cout << "acceptance: " << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return strict ? failures : 0;
}
