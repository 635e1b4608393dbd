#include "specclass/mlc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "specclass/errors.hpp"
#include "specclass/parallel.hpp"

namespace specclass {

namespace {

using nlohmann::json;

// Fills log_det_cov, precision, chol_lower from the (already regularized)
// covariance. Throws NumericError naming the class when the matrix is not
// positive definite.
void refresh_caches(ClassModel& model) {
    Mat lower(model.covariance.size());
    if (!cholesky(model.covariance, lower)) {
        std::ostringstream msg;
        msg << "covariance for class " << model.class_id
            << " is not positive definite";
        throw NumericError(msg.str());
    }
    model.chol_lower = lower;
    model.log_det_cov = chol_log_det(lower);
    model.precision = chol_inverse(lower);
}

} // namespace

PriorsMode priors_mode_from_string(const std::string& s) {
    if (s == "uniform")
        return PriorsMode::Uniform;
    if (s == "proportional")
        return PriorsMode::Proportional;
    throw DataError("unknown priors mode '" + s + "' (expected uniform or proportional)");
}

std::string to_string(PriorsMode mode) {
    return mode == PriorsMode::Uniform ? "uniform" : "proportional";
}

ClassModelSet fit_class_models(const TrainingSet& train, PriorsMode priors,
                               double lambda) {
    if (train.band_count <= 0)
        throw DataError("training set has no bands");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw DataError("regularization must be finite and non-negative");

    const int bands = train.band_count;
    std::map<std::uint32_t, std::vector<const TrainingSample*>> by_class;
    for (const TrainingSample& s : train.entries) {
        if (static_cast<int>(s.features.size()) != bands)
            throw DataError("training sample feature length does not match band count");
        by_class[s.class_id].push_back(&s);
    }
    if (by_class.empty())
        throw DataError("training set is empty");

    ClassModelSet set;
    set.band_count = bands;

    const auto total = static_cast<double>(train.entries.size());
    for (const auto& [id, samples] : by_class) {
        const std::size_t n = samples.size();
        if (n < 2) {
            std::ostringstream msg;
            msg << "class " << id << " has " << n
                << " training samples, need at least 2";
            throw DataError(msg.str());
        }
        ClassModel model;
        model.class_id = id;
        model.mean.assign(static_cast<std::size_t>(bands), 0.0);
        for (const TrainingSample* s : samples)
            for (int b = 0; b < bands; ++b)
                model.mean[static_cast<std::size_t>(b)] += s->features[static_cast<std::size_t>(b)];
        for (double& m : model.mean)
            m /= static_cast<double>(n);

        Mat cov(bands);
        for (const TrainingSample* s : samples) {
            for (int i = 0; i < bands; ++i) {
                const double di = s->features[static_cast<std::size_t>(i)] -
                                  model.mean[static_cast<std::size_t>(i)];
                for (int j = i; j < bands; ++j) {
                    const double dj = s->features[static_cast<std::size_t>(j)] -
                                      model.mean[static_cast<std::size_t>(j)];
                    cov(i, j) += di * dj;
                }
            }
        }
        for (int i = 0; i < bands; ++i)
            for (int j = i; j < bands; ++j) {
                cov(i, j) /= static_cast<double>(n);
                cov(j, i) = cov(i, j);
            }

        double trace = 0.0;
        for (int i = 0; i < bands; ++i)
            trace += cov(i, i);
        const double mean_var = trace / static_cast<double>(bands);
        if (mean_var > 0.0) {
            for (int i = 0; i < bands; ++i)
                cov(i, i) += lambda * mean_var;
        } else {
            cov = Mat::identity(bands);
            for (int i = 0; i < bands; ++i)
                cov(i, i) = 1e-6;
        }
        model.covariance = cov;
        model.prior = priors == PriorsMode::Uniform
                          ? 1.0 / static_cast<double>(by_class.size())
                          : static_cast<double>(n) / total;
        refresh_caches(model);
        set.models.push_back(std::move(model));
    }
    return set;
}

PixelDecision classify_pixel(const std::vector<double>& features,
                             const ClassModelSet& models) {
    if (models.models.empty())
        throw DataError("model set is empty");
    if (static_cast<int>(features.size()) != models.band_count)
        throw DataError("feature vector length does not match model band count");

    PixelDecision decision;
    const std::size_t count = models.models.size();
    decision.discriminants.resize(count);
    decision.posteriors.resize(count);

    const int bands = models.band_count;
    std::vector<double> diff(static_cast<std::size_t>(bands));
    std::size_t best = 0;
    for (std::size_t m = 0; m < count; ++m) {
        const ClassModel& model = models.models[m];
        for (int b = 0; b < bands; ++b)
            diff[static_cast<std::size_t>(b)] =
                features[static_cast<std::size_t>(b)] - model.mean[static_cast<std::size_t>(b)];
        // Solve L y = diff; the Mahalanobis term is |y|^2.
        forward_solve(model.chol_lower, diff);
        double quad = 0.0;
        for (double v : diff)
            quad += v * v;
        for (int b = 0; b < bands; ++b)
            diff[static_cast<std::size_t>(b)] =
                features[static_cast<std::size_t>(b)] - model.mean[static_cast<std::size_t>(b)];
        decision.discriminants[m] =
            std::log(model.prior) - 0.5 * model.log_det_cov - 0.5 * quad;
        if (decision.discriminants[m] > decision.discriminants[best])
            best = m;
    }

    // Softmax over the discriminants, shifted for stability.
    double denom = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
        decision.posteriors[m] =
            std::exp(decision.discriminants[m] - decision.discriminants[best]);
        denom += decision.posteriors[m];
    }
    for (double& p : decision.posteriors)
        p /= denom;

    if (models.threshold && decision.discriminants[best] < *models.threshold)
        decision.class_id = 0;
    else
        decision.class_id = models.models[best].class_id;
    return decision;
}

LabelMask classify_raster(const Raster& raster, const ClassModelSet& models,
                          const std::vector<int>* band_subset,
                          const ClassTable* class_table) {
    raster.validate();
    const int feature_count = band_subset ? static_cast<int>(band_subset->size())
                                          : raster.bands;
    if (feature_count != models.band_count)
        throw DataError("raster band selection does not match model band count");
    if (band_subset)
        for (int b : *band_subset)
            if (b < 0 || b >= raster.bands)
                throw DataError("band subset index out of range");

    LabelMask mask;
    mask.width = raster.width;
    mask.height = raster.height;
    mask.labels.assign(raster.cells(), 0);

    parallel_for(static_cast<std::size_t>(raster.height), [&](std::size_t r) {
        const int row = static_cast<int>(r);
        std::vector<double> features(static_cast<std::size_t>(feature_count));
        for (int col = 0; col < raster.width; ++col) {
            if (band_subset) {
                for (int k = 0; k < feature_count; ++k)
                    features[static_cast<std::size_t>(k)] =
                        raster.at((*band_subset)[static_cast<std::size_t>(k)], row, col);
            } else {
                for (int b = 0; b < raster.bands; ++b)
                    features[static_cast<std::size_t>(b)] = raster.at(b, row, col);
            }
            PixelDecision decision = classify_pixel(features, models);
            mask.labels[static_cast<std::size_t>(row) * raster.width + col] =
                decision.class_id;
        }
    });

    if (class_table) {
        mask.class_table = *class_table;
    } else {
        static const std::array<std::array<int, 3>, 8> palette = {{
            {31, 119, 180},
            {255, 127, 14},
            {44, 160, 44},
            {214, 39, 40},
            {148, 103, 189},
            {140, 86, 75},
            {227, 119, 194},
            {127, 127, 127},
        }};
        std::size_t slot = 0;
        for (const ClassModel& model : models.models) {
            ClassInfo info;
            info.name = "class_" + std::to_string(model.class_id);
            info.rgb = palette[slot % palette.size()];
            ++slot;
            mask.class_table[model.class_id] = info;
        }
    }
    return mask;
}

void write_model_set(const ClassModelSet& models, const std::string& path) {
    json doc;
    doc["band_count"] = models.band_count;
    if (models.threshold)
        doc["threshold"] = *models.threshold;
    else
        doc["threshold"] = nullptr;
    json list = json::array();
    for (const ClassModel& model : models.models) {
        json entry;
        entry["class_id"] = model.class_id;
        entry["prior"] = model.prior;
        entry["mean"] = model.mean;
        std::vector<double> cov;
        cov.reserve(static_cast<std::size_t>(models.band_count) * models.band_count);
        for (int i = 0; i < models.band_count; ++i)
            for (int j = 0; j < models.band_count; ++j)
                cov.push_back(model.covariance(i, j));
        entry["covariance"] = cov;
        list.push_back(std::move(entry));
    }
    doc["models"] = std::move(list);

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot open '" + path + "' for writing");
    out << doc.dump(2) << "\n";
    if (!out)
        throw DataError("failed writing '" + path + "'");
}

ClassModelSet read_model_set(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError("invalid model file '" + path + "': " + e.what());
    }

    ClassModelSet set;
    try {
        set.band_count = doc.at("band_count").get<int>();
        if (set.band_count <= 0)
            throw DataError("model file has non-positive band count");
        if (doc.contains("threshold") && !doc["threshold"].is_null())
            set.threshold = doc["threshold"].get<double>();
        for (const json& entry : doc.at("models")) {
            ClassModel model;
            model.class_id = entry.at("class_id").get<std::uint32_t>();
            model.prior = entry.at("prior").get<double>();
            model.mean = entry.at("mean").get<std::vector<double>>();
            if (static_cast<int>(model.mean.size()) != set.band_count)
                throw DataError("model mean length does not match band count");
            auto cov = entry.at("covariance").get<std::vector<double>>();
            const auto expected =
                static_cast<std::size_t>(set.band_count) * set.band_count;
            if (cov.size() != expected)
                throw DataError("model covariance size does not match band count");
            model.covariance = Mat(set.band_count);
            for (int i = 0; i < set.band_count; ++i)
                for (int j = 0; j < set.band_count; ++j)
                    model.covariance(i, j) =
                        cov[static_cast<std::size_t>(i) * set.band_count + j];
            refresh_caches(model);
            set.models.push_back(std::move(model));
        }
    } catch (const json::exception& e) {
        throw DataError("invalid model file '" + path + "': " + e.what());
    }
    if (set.models.empty())
        throw DataError("model file '" + path + "' contains no classes");
    std::sort(set.models.begin(), set.models.end(),
              [](const ClassModel& a, const ClassModel& b) {
                  return a.class_id < b.class_id;
              });
    for (std::size_t i = 1; i < set.models.size(); ++i)
        if (set.models[i].class_id == set.models[i - 1].class_id)
            throw DataError("model file repeats a class id");
    return set;
}

} // namespace specclass
