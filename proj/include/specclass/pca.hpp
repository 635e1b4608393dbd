#pragma once

#include <cstdint>
#include <vector>

#include "specclass/linalg.hpp"
#include "specclass/raster.hpp"

namespace specclass {

struct BandStatistics {
    std::vector<double> means;          // per band
    Mat covariance;                     // population covariance, B x B
    Mat correlation;                    // unit diagonal; 0 off-diagonal for degenerate bands
    std::vector<std::uint8_t> degenerate; // 1 where a band has zero variance
};

struct PcaResult {
    std::vector<double> eigenvalues;        // descending
    Mat eigenvectors;                       // column k pairs with eigenvalue k
    std::vector<double> variance_explained; // eigenvalue / trace
};

struct BandDrop {
    int kept = 0;
    int dropped = 0;
    double correlation = 0.0;
};

struct BandSelection {
    std::vector<int> retained;
    std::vector<BandDrop> drops;
};

// Covariance/correlation over all pixels, or over labeled pixels only
// when a mask is given. Requires at least 2 contributing pixels.
BandStatistics band_statistics(const Raster& raster, const LabelMask* mask = nullptr);

// Jacobi eigendecomposition of the band covariance; eigenvalues sorted
// descending, eigenvectors sign-fixed (largest-magnitude entry positive).
PcaResult principal_components(const BandStatistics& stats);

// Greedy redundancy rule: scan pairs (i < j) in index order; when both
// are still retained and |corr| >= threshold, drop the smaller-variance
// member (equal variances drop the higher index).
BandSelection select_bands(const BandStatistics& stats, double threshold = 0.95);

} // namespace specclass
