#include "specclass/weierstrass.hpp"

#include <cmath>

#include "specclass/errors.hpp"
#include "specclass/parallel.hpp"

namespace specclass {

BoundaryMode boundary_from_string(const std::string& name) {
    if (name == "reflect") return BoundaryMode::Reflect;
    if (name == "replicate") return BoundaryMode::Replicate;
    if (name == "zero") return BoundaryMode::Zero;
    throw DataError("unknown boundary mode '" + name + "'");
}

std::string to_string(BoundaryMode mode) {
    switch (mode) {
        case BoundaryMode::Reflect: return "reflect";
        case BoundaryMode::Replicate: return "replicate";
        case BoundaryMode::Zero: return "zero";
    }
    return "unknown";
}

namespace {

// Mirror fold about the edge samples (no edge repeat); -1 signals a
// zero-mode miss.
int resolve_index(int i, int n, BoundaryMode mode) {
    if (i >= 0 && i < n) return i;
    switch (mode) {
        case BoundaryMode::Zero:
            return -1;
        case BoundaryMode::Replicate:
            return i < 0 ? 0 : n - 1;
        case BoundaryMode::Reflect: {
            if (n == 1) return 0;
            while (i < 0 || i >= n) {
                if (i < 0) i = -i;
                if (i >= n) i = 2 * n - 2 - i;
            }
            return i;
        }
    }
    return -1;
}

int kernel_radius(double sigma, double truncation) {
    const int r = static_cast<int>(std::ceil(truncation * sigma));
    return r < 1 ? 1 : r;
}

} // namespace

GaussianKernel build_kernel_1d(double sigma, double truncation) {
    if (!(sigma > 0.0)) throw DataError("sigma must be > 0");
    if (!(truncation >= 1.0)) throw DataError("truncation must be >= 1");

    GaussianKernel k;
    k.sigma_x = k.sigma_y = sigma;
    k.rho = 0.0;
    k.radius = kernel_radius(sigma, truncation);
    k.taps.resize(static_cast<std::size_t>(k.width()));

    double sum = 0.0;
    for (int t = -k.radius; t <= k.radius; ++t) {
        const double w = std::exp(-static_cast<double>(t) * t / (2.0 * sigma * sigma));
        k.taps[static_cast<std::size_t>(t + k.radius)] = w;
        sum += w;
    }
    for (double& w : k.taps) w /= sum;
    return k;
}

GaussianKernel build_kernel_2d(double sigma_x, double sigma_y, double rho,
                               double truncation) {
    if (!(sigma_x > 0.0) || !(sigma_y > 0.0)) throw DataError("sigma must be > 0");
    if (!(truncation >= 1.0)) throw DataError("truncation must be >= 1");
    if (!(std::abs(rho) < 1.0))
        throw DataError("|rho| must be < 1 for a positive-definite kernel covariance");

    GaussianKernel k;
    k.sigma_x = sigma_x;
    k.sigma_y = sigma_y;
    k.rho = rho;
    k.radius = kernel_radius(std::max(sigma_x, sigma_y), truncation);
    const int w = k.width();
    k.grid.resize(static_cast<std::size_t>(w) * w);

    const double norm = 2.0 * (1.0 - rho * rho);
    double sum = 0.0;
    for (int j = -k.radius; j <= k.radius; ++j) {     // row offset (y)
        for (int i = -k.radius; i <= k.radius; ++i) { // column offset (x)
            const double u = i / sigma_x;
            const double v = j / sigma_y;
            const double weight = std::exp(-(u * u + v * v - 2.0 * rho * u * v) / norm);
            k.grid[static_cast<std::size_t>(j + k.radius) * w + (i + k.radius)] = weight;
            sum += weight;
        }
    }
    for (double& g : k.grid) g /= sum;
    return k;
}

namespace {

void convolve_rows(const double* src, double* dst, int width, int height,
                   const std::vector<double>& taps, int radius, BoundaryMode mode) {
    parallel_for(static_cast<std::size_t>(height), [&](std::size_t row) {
        const double* in = src + row * width;
        double* out = dst + row * width;
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                const int i = resolve_index(x + t, width, mode);
                if (i >= 0) acc += taps[static_cast<std::size_t>(t + radius)] * in[i];
            }
            out[x] = acc;
        }
    });
}

void convolve_cols(const double* src, double* dst, int width, int height,
                   const std::vector<double>& taps, int radius, BoundaryMode mode) {
    parallel_for(static_cast<std::size_t>(height), [&](std::size_t row) {
        double* out = dst + row * width;
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                const int j = resolve_index(static_cast<int>(row) + t, height, mode);
                if (j >= 0)
                    acc += taps[static_cast<std::size_t>(t + radius)] *
                           src[static_cast<std::size_t>(j) * width + x];
            }
            out[x] = acc;
        }
    });
}

void convolve_grid(const double* src, double* dst, int width, int height,
                   const GaussianKernel& kernel, BoundaryMode mode) {
    const int r = kernel.radius;
    const int kw = kernel.width();
    parallel_for(static_cast<std::size_t>(height), [&](std::size_t row) {
        double* out = dst + row * width;
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int dj = -r; dj <= r; ++dj) {
                const int j = resolve_index(static_cast<int>(row) + dj, height, mode);
                if (j < 0) continue;
                const double* in = src + static_cast<std::size_t>(j) * width;
                const double* wrow = kernel.grid.data() + static_cast<std::size_t>(dj + r) * kw;
                for (int di = -r; di <= r; ++di) {
                    const int i = resolve_index(x + di, width, mode);
                    if (i >= 0) acc += wrow[di + r] * in[i];
                }
            }
            out[x] = acc;
        }
    });
}

} // namespace

Raster apply_transform(const Raster& raster, const GaussianKernel& kernel,
                       BoundaryMode boundary) {
    raster.validate();
    if (kernel.separable() ? kernel.taps.empty() : kernel.grid.empty())
        throw DataError("kernel has no weights");

    Raster out = raster;
    const std::size_t plane = raster.cells();
    std::vector<double> scratch(plane);

    for (int b = 0; b < raster.bands; ++b) {
        const double* src = raster.data.data() + static_cast<std::size_t>(b) * plane;
        double* dst = out.data.data() + static_cast<std::size_t>(b) * plane;
        if (kernel.separable()) {
            convolve_rows(src, scratch.data(), raster.width, raster.height, kernel.taps,
                          kernel.radius, boundary);
            convolve_cols(scratch.data(), dst, raster.width, raster.height, kernel.taps,
                          kernel.radius, boundary);
        } else {
            convolve_grid(src, dst, raster.width, raster.height, kernel, boundary);
        }
    }
    return out;
}

} // namespace specclass
