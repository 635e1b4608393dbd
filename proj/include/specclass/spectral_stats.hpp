#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specclass/raster.hpp"

namespace specclass {

struct Histogram {
    std::vector<double> bin_edges;     // bins + 1, strictly increasing
    std::vector<std::int64_t> counts;  // sums to width * height
    int band_index = 0;
};

enum class NormalityVerdict { ApproximatelyNormal, Skewed, HeavyTailed, Degenerate };

std::string to_string(NormalityVerdict v);

// Quantified stand-in for judging a histogram by eye: a band passes as
// approximately normal when both |skewness| and |excess kurtosis| fall
// under these limits.
struct MomentsThresholds {
    double skewness = 0.5;
    double excess_kurtosis = 1.0;
};

struct MomentsReport {
    double mean = 0.0;
    double variance = 0.0; // population (divide by N)
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    NormalityVerdict verdict = NormalityVerdict::Degenerate;
};

// Equal-width bins spanning [min, max] of the band; the max value lands
// in the last bin. A constant band gets a synthetic unit-wide range so
// the edges stay strictly increasing, with every pixel in one bin.
Histogram band_histogram(const Raster& raster, int band, int bins);

// Population moments; zero variance yields the degenerate verdict with
// skewness/kurtosis reported as 0.
MomentsReport band_moments(const Raster& raster, int band, MomentsThresholds thresholds = {});

} // namespace specclass
