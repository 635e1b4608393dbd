#include "specclass/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specclass/errors.hpp"
#include "specclass/rng.hpp"

namespace specclass {

namespace {

std::vector<double> extract_features(const Raster& raster, int row, int col,
                                     const std::vector<int>* band_subset) {
    std::vector<double> features;
    if (band_subset) {
        features.reserve(band_subset->size());
        for (int b : *band_subset) {
            if (b < 0 || b >= raster.bands) {
                std::ostringstream msg;
                msg << "band index " << b << " out of range [0, " << raster.bands << ")";
                throw DataError(msg.str());
            }
            features.push_back(raster.at(b, row, col));
        }
    } else {
        features.reserve(static_cast<std::size_t>(raster.bands));
        for (int b = 0; b < raster.bands; ++b)
            features.push_back(raster.at(b, row, col));
    }
    return features;
}

} // namespace

TrainingSet stratified_sample(const LabelMask& labels, const Raster& raster,
                              std::size_t per_class, std::uint64_t seed) {
    if (labels.width != raster.width || labels.height != raster.height)
        throw DataError("label mask dimensions do not match raster");
    if (per_class == 0)
        throw DataError("per_class must be at least 1");

    // Row-major pixel lists per class, keyed ascending by class id.
    std::map<std::uint32_t, std::vector<std::size_t>> strata;
    const std::size_t n = labels.labels.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t id = labels.labels[i];
        if (id != 0)
            strata[id].push_back(i);
    }
    if (strata.empty())
        throw DataError("label mask has no labeled pixels");

    TrainingSet set;
    set.seed = seed;
    set.band_count = raster.bands;

    Rng rng(seed);
    for (auto& [id, pixels] : strata) {
        if (pixels.size() < per_class) {
            std::ostringstream msg;
            msg << "class " << id << " has " << pixels.size()
                << " labeled pixels, need " << per_class;
            throw DataError(msg.str());
        }
        // Partial Fisher-Yates: after k swaps the first k slots hold a
        // uniform sample without replacement.
        for (std::size_t k = 0; k < per_class; ++k) {
            std::size_t j = k + static_cast<std::size_t>(rng.bounded(pixels.size() - k));
            std::swap(pixels[k], pixels[j]);
        }
        for (std::size_t k = 0; k < per_class; ++k) {
            std::size_t idx = pixels[k];
            TrainingSample s;
            s.row = static_cast<int>(idx / static_cast<std::size_t>(labels.width));
            s.col = static_cast<int>(idx % static_cast<std::size_t>(labels.width));
            s.class_id = id;
            s.features = extract_features(raster, s.row, s.col, nullptr);
            set.entries.push_back(std::move(s));
        }
        set.per_class_counts[id] = per_class;
    }
    return set;
}

std::pair<TrainingSet, TrainingSet> split_train_eval(const TrainingSet& set,
                                                     double train_fraction,
                                                     std::uint64_t seed) {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
        throw DataError("train_fraction must lie strictly between 0 and 1");

    // Entry indices per class, in original order.
    std::map<std::uint32_t, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < set.entries.size(); ++i)
        by_class[set.entries[i].class_id].push_back(i);

    std::vector<bool> is_train(set.entries.size(), false);
    Rng rng(seed);
    for (auto& [id, indices] : by_class) {
        const std::size_t count = indices.size();
        if (count < 2) {
            std::ostringstream msg;
            msg << "class " << id << " has " << count
                << " entries, need at least 2 to split";
            throw DataError(msg.str());
        }
        auto rounded = static_cast<std::size_t>(
            std::lround(train_fraction * static_cast<double>(count)));
        std::size_t n_train = std::clamp<std::size_t>(rounded, 1, count - 1);
        // Full shuffle, then the first n_train positions go to train.
        std::vector<std::size_t> order = indices;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            std::size_t j = k + static_cast<std::size_t>(rng.bounded(order.size() - k));
            std::swap(order[k], order[j]);
        }
        for (std::size_t k = 0; k < n_train; ++k)
            is_train[order[k]] = true;
    }

    TrainingSet train;
    TrainingSet eval;
    train.seed = set.seed;
    eval.seed = set.seed;
    train.band_count = set.band_count;
    eval.band_count = set.band_count;
    for (std::size_t i = 0; i < set.entries.size(); ++i) {
        TrainingSet& dst = is_train[i] ? train : eval;
        dst.entries.push_back(set.entries[i]);
        dst.per_class_counts[set.entries[i].class_id] += 1;
    }
    return {std::move(train), std::move(eval)};
}

TrainingSet resample_features(const TrainingSet& set, const Raster& raster,
                              const std::vector<int>* band_subset) {
    TrainingSet out;
    out.seed = set.seed;
    out.per_class_counts = set.per_class_counts;
    out.band_count = band_subset ? static_cast<int>(band_subset->size())
                                 : raster.bands;
    out.entries.reserve(set.entries.size());
    for (const TrainingSample& s : set.entries) {
        if (s.row < 0 || s.row >= raster.height || s.col < 0 || s.col >= raster.width)
            throw DataError("training sample coordinates fall outside raster");
        TrainingSample copy;
        copy.row = s.row;
        copy.col = s.col;
        copy.class_id = s.class_id;
        copy.features = extract_features(raster, s.row, s.col, band_subset);
        out.entries.push_back(std::move(copy));
    }
    return out;
}

} // namespace specclass
