#include "bsl/recon_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "bsl/error.hpp"
#include "bsl/parallel.hpp"

namespace bsl {
namespace {

constexpr cplx kI(0.0, 1.0);

void check_grid(const ImagingGrid& grid)
{
    if (grid.nx < 1 || grid.ny < 1 || !(grid.spacing > 0.0)) {
        throw DomainError("imaging grid must be nonempty with positive spacing");
    }
}

} // namespace

ImagingGrid ImagingGrid::square(double half_width, int n)
{
    if (n < 2 || !(half_width > 0.0)) {
        throw DomainError("square grid needs n >= 2 and a positive half width");
    }
    return ImagingGrid{Point(-half_width, -half_width), 2.0 * half_width / (n - 1), n, n};
}

Point ImagingGrid::point(std::size_t index) const
{
    const auto ix = static_cast<double>(index % static_cast<std::size_t>(nx));
    const auto iy = static_cast<double>(index / static_cast<std::size_t>(nx));
    return origin + spacing * Point(ix, iy);
}

double IndicatorField::max_total() const { return total.empty() ? 0.0 : *std::max_element(total.begin(), total.end()); }

double indicator_single(const ScatteringDataset& ds, int source_index, const Point& z)
{
    const std::vector<Point> xs = ds.config.sources();
    if (source_index < 0 || source_index >= static_cast<int>(xs.size())) {
        throw DomainError("indicator_single: source index out of range");
    }
    const double r = (z - xs[static_cast<std::size_t>(source_index)]).norm();
    if (r == 0.0) {
        throw DomainError("indicator_single: sampling point coincides with the source");
    }
    const std::vector<double> ks = ds.config.wavenumbers();
    cplx sum = 0.0;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        sum += std::sqrt(ks[j]) * std::exp(-2.0 * kI * ks[j] * r) *
               ds.values(source_index, static_cast<Eigen::Index>(j));
    }
    return std::abs(sum);
}

IndicatorField indicator_total(const ScatteringDataset& ds, const ImagingGrid& grid, bool keep_per_source)
{
    check_grid(grid);
    const std::vector<Point> xs = ds.config.sources();
    const std::vector<double> ks = ds.config.wavenumbers();
    const std::size_t n_points = grid.size();
    const std::size_t n_k = ks.size();
    if (ds.values.rows() != static_cast<Eigen::Index>(xs.size()) ||
        ds.values.cols() != static_cast<Eigen::Index>(n_k)) {
        throw DomainError("indicator_total: dataset dimensions do not match its configuration");
    }
    for (std::size_t p = 0; p < n_points; ++p) {
        for (const Point& x : xs) {
            if ((grid.point(p) - x).norm() == 0.0) {
                throw DomainError("indicator_total: a grid point coincides with a source");
            }
        }
    }

    // Weighted data sqrt(k_j) u_ij; the phase e^{-2 i k_j r} advances by a fixed factor per step.
    const double dk = n_k > 1 ? ks[1] - ks[0] : 0.0;
    std::vector<std::vector<double>> fields(xs.size(), std::vector<double>(n_points));
    parallel_for(xs.size(), [&](std::size_t i) {
        std::vector<cplx> weighted(n_k);
        for (std::size_t j = 0; j < n_k; ++j) {
            weighted[j] = std::sqrt(ks[j]) * ds.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
        std::vector<double>& out = fields[i];
        for (std::size_t p = 0; p < n_points; ++p) {
            const double r = (grid.point(p) - xs[i]).norm();
            cplx phase = std::exp(-2.0 * kI * ks[0] * r);
            const cplx step = std::exp(-2.0 * kI * dk * r);
            cplx sum = 0.0;
            for (std::size_t j = 0; j < n_k; ++j) {
                sum += weighted[j] * phase;
                phase *= step;
            }
            out[p] = std::abs(sum);
        }
    });

    IndicatorField field;
    field.grid = grid;
    field.total.assign(n_points, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double peak = *std::max_element(fields[i].begin(), fields[i].end());
        if (!(peak > 0.0)) {
            throw NumericalError("indicator_total: indicator of source " + std::to_string(i) +
                                 " vanishes on the whole grid (degenerate data)");
        }
        for (std::size_t p = 0; p < n_points; ++p) {
            field.total[p] += fields[i][p] / peak;
        }
    }
    if (keep_per_source) {
        field.per_source = std::move(fields);
    }
    return field;
}

void export_csv(const IndicatorField& field, const std::filesystem::path& path, bool per_source)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.precision(12);
    const bool extra = per_source && !field.per_source.empty();
    out << "x,y,I_total";
    if (extra) {
        for (std::size_t i = 0; i < field.per_source.size(); ++i) {
            out << ",I_" << i;
        }
    }
    out << '\n';
    for (std::size_t p = 0; p < field.total.size(); ++p) {
        const Point z = field.grid.point(p);
        out << z.x() << ',' << z.y() << ',' << field.total[p];
        if (extra) {
            for (const auto& f : field.per_source) {
                out << ',' << f[p];
            }
        }
        out << '\n';
    }
}

} // namespace bsl
