#include "specclass/spectral_stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specclass/errors.hpp"

namespace specclass {

std::string to_string(NormalityVerdict v) {
    switch (v) {
        case NormalityVerdict::ApproximatelyNormal: return "approximately-normal";
        case NormalityVerdict::Skewed: return "skewed";
        case NormalityVerdict::HeavyTailed: return "heavy-tailed";
        case NormalityVerdict::Degenerate: return "degenerate";
    }
    return "unknown";
}

namespace {

void check_band(const Raster& raster, int band) {
    if (band < 0 || band >= raster.bands) {
        std::ostringstream msg;
        msg << "band " << band << " out of range (raster has " << raster.bands << ")";
        throw DataError(msg.str());
    }
}

} // namespace

Histogram band_histogram(const Raster& raster, int band, int bins) {
    check_band(raster, band);
    if (bins < 1) throw DataError("bins must be >= 1");

    const std::size_t n = raster.cells();
    const double* samples = raster.data.data() + static_cast<std::size_t>(band) * n;

    double lo = samples[0], hi = samples[0];
    for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, samples[i]);
        hi = std::max(hi, samples[i]);
    }
    if (lo == hi) { // constant band: synthetic range keeps edges increasing
        lo -= 0.5;
        hi += 0.5;
    }

    Histogram h;
    h.band_index = band;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    const double width = hi - lo;
    for (int k = 0; k <= bins; ++k)
        h.bin_edges[static_cast<std::size_t>(k)] = lo + width * k / bins;
    h.bin_edges.front() = lo;
    h.bin_edges.back() = hi;

    for (std::size_t i = 0; i < n; ++i) {
        int bin = static_cast<int>((samples[i] - lo) / width * bins);
        bin = std::clamp(bin, 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(bin)];
    }
    return h;
}

MomentsReport band_moments(const Raster& raster, int band, MomentsThresholds thresholds) {
    check_band(raster, band);
    const std::size_t n = raster.cells();
    if (n < 4) throw DataError("band_moments requires at least 4 pixels");

    const double* samples = raster.data.data() + static_cast<std::size_t>(band) * n;

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += samples[i];
    mean /= static_cast<double>(n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = samples[i] - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);

    MomentsReport report;
    report.mean = mean;
    report.variance = m2;
    if (m2 <= 0.0) {
        report.verdict = NormalityVerdict::Degenerate;
        return report;
    }
    report.skewness = m3 / std::pow(m2, 1.5);
    report.excess_kurtosis = m4 / (m2 * m2) - 3.0;

    const bool skewed = std::abs(report.skewness) >= thresholds.skewness;
    const bool heavy = std::abs(report.excess_kurtosis) >= thresholds.excess_kurtosis;
    if (!skewed && !heavy)
        report.verdict = NormalityVerdict::ApproximatelyNormal;
    else if (skewed)
        report.verdict = NormalityVerdict::Skewed;
    else
        report.verdict = NormalityVerdict::HeavyTailed;
    return report;
}

} // namespace specclass
