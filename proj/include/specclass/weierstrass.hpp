#pragma once

#include <string>
#include <vector>

#include "specclass/raster.hpp"

namespace specclass {

enum class BoundaryMode { Reflect, Replicate, Zero };

BoundaryMode boundary_from_string(const std::string& name);
std::string to_string(BoundaryMode mode);

// Discrete Gaussian built by sampling the density on integer taps and
// renormalizing to unit sum. The classical transform kernel
// e^{-x^2/4}/sqrt(4*pi) has variance 2, hence the sqrt(2) default sigma
// used throughout the pipeline.
//
// Separable storage (taps) is used for the isotropic uncorrelated case;
// anything with rho != 0 or sigma_x != sigma_y carries the full grid.
struct GaussianKernel {
    double sigma_x = 0.0;
    double sigma_y = 0.0;
    double rho = 0.0;
    int radius = 0;
    std::vector<double> taps; // 2*radius+1, separable case only
    std::vector<double> grid; // (2*radius+1)^2 row-major, otherwise

    bool separable() const { return !taps.empty(); }
    int width() const { return 2 * radius + 1; }
};

// radius = ceil(truncation * sigma); tap k is proportional to
// exp(-k^2 / (2 sigma^2)).
GaussianKernel build_kernel_1d(double sigma, double truncation = 3.0);

// weight(i,j) proportional to the centered bivariate Gaussian with
// covariance [[sx^2, rho sx sy], [rho sx sy, sy^2]]; |rho| >= 1 is
// rejected (covariance not positive definite).
GaussianKernel build_kernel_2d(double sigma_x, double sigma_y, double rho,
                               double truncation = 3.0);

// Convolves every band independently; output shape equals input shape.
// Separable kernels run as two 1-D passes, full grids as direct 2-D
// convolution. Rows are processed in parallel with disjoint writes, so
// the result does not depend on the schedule.
Raster apply_transform(const Raster& raster, const GaussianKernel& kernel,
                       BoundaryMode boundary = BoundaryMode::Reflect);

} // namespace specclass
