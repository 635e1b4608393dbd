#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specclass/linalg.hpp"
#include "specclass/raster.hpp"
#include "specclass/sampling.hpp"

namespace specclass {

enum class PriorsMode { Uniform, Proportional };

PriorsMode priors_mode_from_string(const std::string& s);
std::string to_string(PriorsMode mode);

struct ClassModel {
    std::uint32_t class_id = 0;
    std::vector<double> mean;
    Mat covariance;   // regularized, as used for classification
    double prior = 0.0;
    // Cached terms, recomputed whenever the covariance changes.
    double log_det_cov = 0.0;
    Mat precision;
    Mat chol_lower;
};

struct ClassModelSet {
    std::vector<ClassModel> models; // ascending class_id
    int band_count = 0;
    std::optional<double> threshold; // on the log discriminant
};

struct PixelDecision {
    std::uint32_t class_id = 0; // 0 when rejected by the threshold
    std::vector<double> discriminants;
    std::vector<double> posteriors;
};

// Per-class Gaussian fit: population mean/covariance of the class samples,
// ridge term lambda * (trace/B) on the diagonal. A class whose covariance
// is identically zero gets 1e-6 * I so it stays usable.
ClassModelSet fit_class_models(const TrainingSet& train, PriorsMode priors,
                               double lambda = 1e-6);

PixelDecision classify_pixel(const std::vector<double>& features,
                             const ClassModelSet& models);

// Classifies every pixel; band_subset picks which raster bands form the
// feature vector (defaults to all, which must match the model dimension).
LabelMask classify_raster(const Raster& raster, const ClassModelSet& models,
                          const std::vector<int>* band_subset = nullptr,
                          const ClassTable* class_table = nullptr);

void write_model_set(const ClassModelSet& models, const std::string& path);
ClassModelSet read_model_set(const std::string& path);

} // namespace specclass
