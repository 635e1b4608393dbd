#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specclass/evaluation.hpp"
#include "specclass/mlc.hpp"
#include "specclass/pca.hpp"
#include "specclass/weierstrass.hpp"

namespace specclass {

struct PipelineConfig {
    std::string raster_path;
    std::string labels_path;
    std::string output_dir;
    double sigma = 1.4142135623730951; // sqrt(2): the classical transform kernel
    std::optional<double> sigma_y;
    double rho = 0.0;
    double truncation = 3.0;
    BoundaryMode boundary = BoundaryMode::Reflect;
    double pca_threshold = 0.95;
    std::size_t per_class = 500;
    double train_fraction = 0.7;
    PriorsMode priors = PriorsMode::Uniform;
    double regularization = 1e-6;
    std::optional<double> threshold;
    std::uint64_t seed = 42;
};

struct BranchResult {
    double overall_accuracy = 0.0;
    std::optional<double> kappa;
    double holdout_accuracy = 0.0;
    ConfusionMatrix confusion;
};

struct PipelineResult {
    BranchResult before;
    BranchResult after;
    double delta_oa_pp = 0.0;          // percentage points
    std::optional<double> delta_kappa; // absent when either kappa is undefined
    std::vector<int> retained_bands;
    std::vector<std::string> outputs;  // paths written, in write order
};

// The one-shot comparison: classify the original raster, then the
// transformed raster, holding everything else fixed. Band selection is
// computed once (on the transformed image) and training pixels are
// sampled once (coordinates reused, features re-extracted per branch),
// so the transform is the only varying factor.
PipelineResult run_pipeline(const PipelineConfig& config);

} // namespace specclass
