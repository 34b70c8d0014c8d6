#pragma once

#include <filesystem>
#include <vector>

#include "bsl/data_pipeline.hpp"

namespace bsl {

/// Uniform lattice origin + (ix h, iy h), ix < nx, iy < ny. Points are indexed row-major: iy nx + ix.
struct ImagingGrid {
    Point origin = Point(-3.0, -3.0);
    double spacing = 0.03;
    int nx = 201;
    int ny = 201;

    /// n x n lattice covering [-half_width, half_width]^2.
    static ImagingGrid square(double half_width = 3.0, int n = 201);

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    [[nodiscard]] Point point(std::size_t index) const;
};

struct IndicatorField {
    ImagingGrid grid;
    std::vector<std::vector<double>> per_source; ///< I_{x_i}(z), empty unless requested
    std::vector<double> total;                   ///< sum_i I_{x_i}(z) / max_z I_{x_i}(z)

    [[nodiscard]] double max_total() const;
};

/// I_x(z) = |sum_j k_j^{1/2} e^{-2 i k_j |z - x|} u^s(x; x, k_j)| for source x = x_i.
double indicator_single(const ScatteringDataset& ds, int source_index, const Point& z);

/// Per-source indicators normalized by their grid maximum and summed.
IndicatorField indicator_total(const ScatteringDataset& ds, const ImagingGrid& grid = ImagingGrid{},
                               bool keep_per_source = false);

/// Columns x, y, I_total (plus I_0.. I_{Ns-1} when per-source fields are kept and requested).
void export_csv(const IndicatorField& field, const std::filesystem::path& path, bool per_source = false);

} // namespace bsl
