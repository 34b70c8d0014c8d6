#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "bsl/forward_solver.hpp"
#include "bsl/geometry.hpp"

namespace bsl {

/// Point sources on a circle of radius R, sampled at a uniform wavenumber grid.
struct MeasurementConfig {
    double radius = 5.0;
    int n_sources = 32;
    double k_min = 10.0;
    double k_max = 30.0;
    double dk = 0.2;
    double noise_level = 0.10;
    std::uint64_t seed = 0;

    /// k_j = k_min + j dk, j = 0..round((k_max - k_min)/dk).
    [[nodiscard]] std::vector<double> wavenumbers() const;
    /// x_i = R (cos(2 pi i/N_s), sin(2 pi i/N_s)).
    [[nodiscard]] std::vector<Point> sources() const;
    /// dk < pi/(4R): frequency sampling fine enough to avoid range aliasing of the indicator.
    [[nodiscard]] bool resolves_range() const;
    /// Throws DomainError on non-positive or inconsistent parameters.
    void validate() const;
};

enum class Engine { Nystrom, Asymptotic };
enum class Provenance { Solver, Asymptotic, File };

std::string to_string(Engine engine);
std::string to_string(Provenance provenance);
Engine engine_from_string(const std::string& name);

/// Multi-frequency backscattering data u^s(x_i; x_i, k_j), rows = sources, columns = wavenumbers.
struct ScatteringDataset {
    MeasurementConfig config;
    Eigen::MatrixXcd values;
    Provenance provenance = Provenance::File;
    bool noisy = false;
    /// Curve and boundary condition used to generate the data. Metadata for scoring only.
    std::optional<nlohmann::json> truth;
};

/// Serialized form of a boundary condition: {"kind": ..., "gamma": number} or {"kind": "robin", "profile": name}.
nlohmann::json impedance_to_json(const ImpedanceModel& bc);
ImpedanceModel impedance_from_json(const nlohmann::json& j);

/// Named variable-impedance profiles. "3+sin(t)" is 3 + sin(t) in the egg's curve parameter t.
ImpedanceModel impedance_preset(const std::string& name);

ScatteringDataset generate(const BoundaryCurve& curve, const ImpedanceModel& bc, const MeasurementConfig& config,
                           Engine engine = Engine::Nystrom);

/// u <- u + level (xi + i zeta)/sqrt(2) |u|, xi and zeta standard normal, drawn in row-major order.
ScatteringDataset add_noise(const ScatteringDataset& ds, double level, std::uint64_t seed);

nlohmann::json to_json(const ScatteringDataset& ds);
ScatteringDataset dataset_from_json(const nlohmann::json& j);

void save(const ScatteringDataset& ds, const std::filesystem::path& path);
ScatteringDataset load(const std::filesystem::path& path);

/// Columns i, j, x_re, x_im, k, u_re, u_im.
void export_csv(const ScatteringDataset& ds, const std::filesystem::path& path);

} // namespace bsl
