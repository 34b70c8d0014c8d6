#include "bsl/data_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "bsl/asymptotics.hpp"
#include "bsl/error.hpp"
#include "bsl/parallel.hpp"

namespace bsl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kFormatVersion = 1;

using nlohmann::json;

const json& field(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError("dataset: missing field '" + where + key + "'");
    }
    return j.at(key);
}

template <typename T>
T number(const json& j, const char* key, const std::string& where)
{
    const json& v = field(j, key, where);
    if (!v.is_number()) {
        throw ParseError("dataset: field '" + where + key + "' must be a number");
    }
    return v.get<T>();
}

// Rethrows solver failures with the measurement index attached, keeping the error category.
template <typename Fn>
void with_context(const std::string& context, Fn&& fn)
{
    try {
        fn();
    } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) + " [" + context + "]");
    } catch (const NumericalError& e) {
        throw NumericalError(std::string(e.what()) + " [" + context + "]");
    }
}

} // namespace

std::vector<double> MeasurementConfig::wavenumbers() const
{
    validate();
    const auto count = static_cast<int>(std::llround((k_max - k_min) / dk)) + 1;
    std::vector<double> ks(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        ks[static_cast<std::size_t>(j)] = k_min + j * dk;
    }
    return ks;
}

std::vector<Point> MeasurementConfig::sources() const
{
    validate();
    std::vector<Point> xs;
    xs.reserve(static_cast<std::size_t>(n_sources));
    for (int i = 0; i < n_sources; ++i) {
        const double t = 2.0 * kPi * i / n_sources;
        xs.emplace_back(radius * std::cos(t), radius * std::sin(t));
    }
    return xs;
}

bool MeasurementConfig::resolves_range() const { return dk < kPi / (4.0 * radius); }

void MeasurementConfig::validate() const
{
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw DomainError("measurement radius must be positive");
    }
    if (n_sources < 1) {
        throw DomainError("at least one source is required");
    }
    if (!(k_min > 0.0) || !(k_max >= k_min) || !std::isfinite(k_max)) {
        throw DomainError("wavenumber range must satisfy 0 < k_min <= k_max");
    }
    if (k_max > k_min) {
        if (!(dk > 0.0)) {
            throw DomainError("wavenumber step must be positive");
        }
        const double steps = (k_max - k_min) / dk;
        if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
            throw DomainError("(k_max - k_min) must be an integer multiple of dk");
        }
    }
    if (!(noise_level >= 0.0) || !std::isfinite(noise_level)) {
        throw DomainError("noise level must be non-negative");
    }
}

std::string to_string(Engine engine) { return engine == Engine::Nystrom ? "nystrom" : "asymptotic"; }

std::string to_string(Provenance provenance)
{
    switch (provenance) {
    case Provenance::Solver:
        return "solver";
    case Provenance::Asymptotic:
        return "asymptotic";
    case Provenance::File:
        break;
    }
    return "file";
}

Engine engine_from_string(const std::string& name)
{
    if (name == "nystrom") {
        return Engine::Nystrom;
    }
    if (name == "asymptotic") {
        return Engine::Asymptotic;
    }
    throw DomainError("unknown engine '" + name + "' (expected nystrom or asymptotic)");
}

json impedance_to_json(const ImpedanceModel& bc)
{
    json j{{"kind", to_string(bc.kind())}};
    if (bc.kind() == BoundaryKind::Robin) {
        if (bc.constant_gamma()) {
            j["gamma"] = *bc.constant_gamma();
        } else {
            j["profile"] = bc.label();
        }
    }
    return j;
}

ImpedanceModel impedance_from_json(const json& j)
{
    const std::string kind = field(j, "kind", "bc.").get<std::string>();
    if (kind == "dirichlet") {
        return ImpedanceModel::dirichlet();
    }
    if (kind == "neumann") {
        return ImpedanceModel::neumann();
    }
    if (kind == "robin") {
        if (j.contains("gamma")) {
            return ImpedanceModel::robin_constant(number<double>(j, "gamma", "bc."));
        }
        try {
            return impedance_preset(field(j, "profile", "bc.").get<std::string>());
        } catch (const DomainError& e) {
            throw ParseError(e.what());
        }
    }
    throw ParseError("unknown boundary condition kind '" + kind + "'");
}

ImpedanceModel impedance_preset(const std::string& name)
{
    if (name == "3+sin(t)") {
        return ImpedanceModel::robin([](double theta) { return 3.0 + std::sin(egg::parameter_from_angle(theta)); },
                                     name);
    }
    throw DomainError("unknown impedance profile '" + name + "'");
}

ScatteringDataset generate(const BoundaryCurve& curve, const ImpedanceModel& bc, const MeasurementConfig& config,
                           Engine engine)
{
    const std::vector<double> ks = config.wavenumbers();
    const std::vector<Point> xs = config.sources();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!curve.strictly_outside(xs[i])) {
            throw DomainError("generate: source " + std::to_string(i) + " is not outside the obstacle");
        }
    }

    ScatteringDataset ds;
    ds.config = config;
    ds.values.resize(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ks.size()));
    ds.provenance = engine == Engine::Nystrom ? Provenance::Solver : Provenance::Asymptotic;
    ds.truth = json{{"curve", curve}, {"bc", impedance_to_json(bc)}};

    if (engine == Engine::Asymptotic) {
        parallel_for(xs.size() * ks.size(), [&](std::size_t idx) {
            const std::size_t i = idx / ks.size();
            const std::size_t j = idx % ks.size();
            with_context("source " + std::to_string(i) + ", k = " + std::to_string(ks[j]), [&] {
                ds.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    predict_backscatter(curve, bc, xs[i], ks[j]).leading;
            });
        });
        return ds;
    }

    parallel_for(ks.size(), [&](std::size_t j) {
        const double k = ks[j];
        with_context("k index " + std::to_string(j) + ", k = " + std::to_string(k), [&] {
            const NystromSystem sys = NystromSystem::assemble(curve, k, bc, default_quadrature_size(curve, k));
            const std::vector<Density> densities = sys.solve(xs);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                ds.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    sys.evaluate(densities[i], xs[i]);
            }
        });
    });
    return ds;
}

ScatteringDataset add_noise(const ScatteringDataset& ds, double level, std::uint64_t seed)
{
    if (!(level >= 0.0) || !std::isfinite(level)) {
        throw DomainError("add_noise: level must be non-negative");
    }
    ScatteringDataset out = ds;
    out.config.noise_level = level;
    out.config.seed = seed;
    if (level == 0.0) {
        return out;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = level / std::numbers::sqrt2;
    for (Eigen::Index i = 0; i < out.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
            const double xi = normal(rng);
            const double zeta = normal(rng);
            cplx& u = out.values(i, j);
            u += scale * cplx(xi, zeta) * std::abs(u);
        }
    }
    out.noisy = true;
    return out;
}

json to_json(const ScatteringDataset& ds)
{
    const MeasurementConfig& c = ds.config;
    json values = json::array();
    for (Eigen::Index i = 0; i < ds.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < ds.values.cols(); ++j) {
            values.push_back({ds.values(i, j).real(), ds.values(i, j).imag()});
        }
    }
    json j{{"format_version", kFormatVersion},
           {"config",
            {{"R", c.radius},
             {"Ns", c.n_sources},
             {"kmin", c.k_min},
             {"kmax", c.k_max},
             {"dk", c.dk},
             {"noise_level", c.noise_level},
             {"seed", c.seed}}},
           {"provenance", to_string(ds.provenance)},
           {"noisy", ds.noisy},
           {"values", std::move(values)}};
    j["truth"] = ds.truth ? *ds.truth : json(nullptr);
    return j;
}

ScatteringDataset dataset_from_json(const json& j)
{
    const int version = number<int>(j, "format_version", "");
    if (version != kFormatVersion) {
        throw ParseError("dataset: unsupported format_version " + std::to_string(version) + " (expected " +
                         std::to_string(kFormatVersion) + ")");
    }
    ScatteringDataset ds;
    const json& c = field(j, "config", "");
    ds.config.radius = number<double>(c, "R", "config.");
    ds.config.n_sources = number<int>(c, "Ns", "config.");
    ds.config.k_min = number<double>(c, "kmin", "config.");
    ds.config.k_max = number<double>(c, "kmax", "config.");
    ds.config.dk = number<double>(c, "dk", "config.");
    ds.config.noise_level = number<double>(c, "noise_level", "config.");
    ds.config.seed = number<std::uint64_t>(c, "seed", "config.");
    std::vector<double> ks;
    try {
        ks = ds.config.wavenumbers();
    } catch (const DomainError& e) {
        throw ParseError(std::string("dataset: invalid config: ") + e.what());
    }

    ds.provenance = Provenance::File;
    ds.noisy = j.contains("noisy") && j.at("noisy").is_boolean() && j.at("noisy").get<bool>();
    if (j.contains("truth") && !j.at("truth").is_null()) {
        ds.truth = j.at("truth");
    }

    const json& values = field(j, "values", "");
    const auto rows = static_cast<std::size_t>(ds.config.n_sources);
    const std::size_t cols = ks.size();
    if (!values.is_array() || values.size() != rows * cols) {
        throw ParseError("dataset: field 'values' must hold " + std::to_string(rows * cols) + " entries, found " +
                         std::to_string(values.is_array() ? values.size() : 0));
    }
    ds.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
        const json& v = values[idx];
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw ParseError("dataset: values[" + std::to_string(idx) + "] must be a [re, im] pair");
        }
        const cplx u(v[0].get<double>(), v[1].get<double>());
        if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) {
            throw ParseError("dataset: values[" + std::to_string(idx) + "] is not finite");
        }
        ds.values(static_cast<Eigen::Index>(idx / cols), static_cast<Eigen::Index>(idx % cols)) = u;
    }
    return ds;
}

void save(const ScatteringDataset& ds, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << to_json(ds).dump(1) << '\n';
}

ScatteringDataset load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open dataset " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ParseError(path.string() + ":" + std::to_string(line) + ": malformed JSON: " + e.what());
    }
    try {
        return dataset_from_json(j);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void export_csv(const ScatteringDataset& ds, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.precision(17);
    const std::vector<double> ks = ds.config.wavenumbers();
    const std::vector<Point> xs = ds.config.sources();
    out << "i,j,x_re,x_im,k,u_re,u_im\n";
    for (Eigen::Index i = 0; i < ds.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < ds.values.cols(); ++j) {
            const Point& x = xs[static_cast<std::size_t>(i)];
            const cplx u = ds.values(i, j);
            out << i << ',' << j << ',' << x.x() << ',' << x.y() << ',' << ks[static_cast<std::size_t>(j)] << ','
                << u.real() << ',' << u.imag() << '\n';
        }
    }
}

} // namespace bsl
