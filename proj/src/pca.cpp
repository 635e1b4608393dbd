#include "specclass/pca.hpp"

#include <cmath>

#include "specclass/errors.hpp"

namespace specclass {

BandStatistics band_statistics(const Raster& raster, const LabelMask* mask) {
    raster.validate();
    if (mask && (mask->width != raster.width || mask->height != raster.height))
        throw DataError("mask dimensions do not match raster");

    const int bands = raster.bands;
    const std::size_t plane = raster.cells();

    std::size_t count = 0;
    std::vector<double> sums(static_cast<std::size_t>(bands), 0.0);
    for (std::size_t p = 0; p < plane; ++p) {
        if (mask && mask->labels[p] == 0) continue;
        ++count;
        for (int b = 0; b < bands; ++b)
            sums[static_cast<std::size_t>(b)] += raster.data[static_cast<std::size_t>(b) * plane + p];
    }
    if (count < 2) throw DataError("band_statistics needs at least 2 contributing pixels");

    BandStatistics stats;
    stats.means.resize(static_cast<std::size_t>(bands));
    for (int b = 0; b < bands; ++b)
        stats.means[static_cast<std::size_t>(b)] = sums[static_cast<std::size_t>(b)] / static_cast<double>(count);

    stats.covariance = Mat(bands);
    std::vector<double> centered(static_cast<std::size_t>(bands));
    for (std::size_t p = 0; p < plane; ++p) {
        if (mask && mask->labels[p] == 0) continue;
        for (int b = 0; b < bands; ++b)
            centered[static_cast<std::size_t>(b)] =
                raster.data[static_cast<std::size_t>(b) * plane + p] - stats.means[static_cast<std::size_t>(b)];
        for (int i = 0; i < bands; ++i)
            for (int j = i; j < bands; ++j)
                stats.covariance(i, j) += centered[static_cast<std::size_t>(i)] * centered[static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < bands; ++i)
        for (int j = i; j < bands; ++j) {
            const double c = stats.covariance(i, j) / static_cast<double>(count);
            stats.covariance(i, j) = c;
            stats.covariance(j, i) = c;
        }

    stats.degenerate.assign(static_cast<std::size_t>(bands), 0);
    for (int b = 0; b < bands; ++b)
        if (stats.covariance(b, b) <= 0.0) stats.degenerate[static_cast<std::size_t>(b)] = 1;

    stats.correlation = Mat(bands);
    for (int i = 0; i < bands; ++i) {
        stats.correlation(i, i) = 1.0;
        for (int j = i + 1; j < bands; ++j) {
            double r = 0.0;
            if (!stats.degenerate[static_cast<std::size_t>(i)] && !stats.degenerate[static_cast<std::size_t>(j)])
                r = stats.covariance(i, j) /
                    std::sqrt(stats.covariance(i, i) * stats.covariance(j, j));
            stats.correlation(i, j) = r;
            stats.correlation(j, i) = r;
        }
    }
    return stats;
}

PcaResult principal_components(const BandStatistics& stats) {
    const int n = stats.covariance.size();
    if (n == 0) throw DataError("empty covariance");

    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(stats.covariance(i, j)));
    const double tol = (scale > 0.0 ? scale : 1.0) * 1e-12;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(stats.covariance(i, j) - stats.covariance(j, i)) > tol)
                throw DataError("covariance matrix is not symmetric");

    PcaResult result;
    jacobi_eigen(stats.covariance, result.eigenvalues, result.eigenvectors);

    double trace = 0.0;
    for (const double ev : result.eigenvalues) trace += ev;
    result.variance_explained.resize(result.eigenvalues.size(), 0.0);
    if (trace > 0.0)
        for (std::size_t k = 0; k < result.eigenvalues.size(); ++k)
            result.variance_explained[k] = result.eigenvalues[k] / trace;
    return result;
}

BandSelection select_bands(const BandStatistics& stats, double threshold) {
    if (!(threshold > 0.0) || !(threshold <= 1.0))
        throw DataError("correlation threshold must be in (0, 1]");

    const int n = stats.covariance.size();
    std::vector<bool> retained(static_cast<std::size_t>(n), true);
    BandSelection selection;

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!retained[static_cast<std::size_t>(i)] || !retained[static_cast<std::size_t>(j)]) continue;
            const double r = stats.correlation(i, j);
            if (std::abs(r) < threshold) continue;
            const double var_i = stats.covariance(i, i);
            const double var_j = stats.covariance(j, j);
            const int drop = var_i < var_j ? i : (var_j < var_i ? j : j);
            retained[static_cast<std::size_t>(drop)] = false;
            selection.drops.push_back({drop == i ? j : i, drop, r});
        }
    }
    for (int b = 0; b < n; ++b)
        if (retained[static_cast<std::size_t>(b)]) selection.retained.push_back(b);
    return selection;
}

} // namespace specclass
