#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "specclass/raster.hpp"

namespace specclass {

struct TrainingSample {
    int row = 0;
    int col = 0;
    std::uint32_t class_id = 0;
    std::vector<double> features;
};

struct TrainingSet {
    std::vector<TrainingSample> entries;
    std::uint64_t seed = 0;
    std::map<std::uint32_t, std::size_t> per_class_counts;
    int band_count = 0;
};

// Draws exactly per_class pixels uniformly without replacement from each
// class stratum (partial Fisher-Yates over the stratum's row-major pixel
// list, one fixed PRNG stream). Classes are processed in ascending id
// order, so a (mask, raster, per_class, seed) tuple always yields the
// same entries. A class with fewer labeled pixels than per_class is an
// error naming that class.
TrainingSet stratified_sample(const LabelMask& labels, const Raster& raster,
                              std::size_t per_class, std::uint64_t seed);

// Per-class split: round(train_fraction * n) to train, clamped so both
// sides keep at least one entry. Deterministic per seed; the two outputs
// partition the input, preserving entry order.
std::pair<TrainingSet, TrainingSet> split_train_eval(const TrainingSet& set,
                                                     double train_fraction,
                                                     std::uint64_t seed);

// Rebuilds feature vectors at the same coordinates from another raster,
// optionally restricted to a band subset. Used to compare classification
// branches on identical training pixels.
TrainingSet resample_features(const TrainingSet& set, const Raster& raster,
                              const std::vector<int>* band_subset = nullptr);

} // namespace specclass
