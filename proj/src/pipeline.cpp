#include "specclass/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "specclass/errors.hpp"
#include "specclass/sampling.hpp"

namespace specclass {

namespace {

using nlohmann::json;

json optional_to_json(const std::optional<double>& value) {
    if (value)
        return *value;
    return nullptr;
}

json accuracy_to_json(const AccuracyReport& report, const ConfusionMatrix& cm,
                      double holdout, std::uint64_t seed) {
    json doc;
    doc["seed"] = seed;
    doc["overall_accuracy"] = report.overall_accuracy;
    doc["kappa"] = optional_to_json(report.kappa);
    doc["holdout_accuracy"] = holdout;
    json producer = json::object();
    json user = json::object();
    for (std::size_t k = 0; k < cm.class_ids.size(); ++k) {
        const std::string key = std::to_string(cm.class_ids[k]);
        producer[key] = optional_to_json(report.producer_accuracy[k]);
        user[key] = optional_to_json(report.user_accuracy[k]);
    }
    doc["producer_accuracy"] = std::move(producer);
    doc["user_accuracy"] = std::move(user);
    doc["class_ids"] = cm.class_ids;
    json rows = json::array();
    for (std::size_t r = 0; r <= cm.class_ids.size(); ++r) {
        json row = json::array();
        for (std::size_t k = 0; k < cm.class_ids.size(); ++k)
            row.push_back(cm.at(r, k));
        rows.push_back(std::move(row));
    }
    doc["confusion"] = std::move(rows);
    doc["total_evaluated"] = cm.total;
    return doc;
}

json area_to_json(const AreaReport& report, std::uint64_t seed) {
    json doc;
    doc["seed"] = seed;
    doc["pixel_size_m"] = report.pixel_size_m;
    doc["total_pixels"] = report.total_pixels;
    json rows = json::array();
    for (const AreaRow& row : report.rows) {
        json entry;
        entry["class_id"] = row.class_id;
        entry["name"] = row.name;
        entry["pixel_count"] = row.pixel_count;
        entry["percent"] = row.percent;
        entry["area_m2"] = row.area_m2;
        rows.push_back(std::move(entry));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

void save_json(const json& doc, const std::string& path,
               std::vector<std::string>& outputs) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot open '" + path + "' for writing");
    out << doc.dump(2) << "\n";
    if (!out)
        throw DataError("failed writing '" + path + "'");
    outputs.push_back(path);
}

double holdout_accuracy(const TrainingSet& eval, const ClassModelSet& models) {
    if (eval.entries.empty())
        throw DataError("holdout set is empty");
    std::size_t hits = 0;
    for (const TrainingSample& s : eval.entries)
        if (classify_pixel(s.features, models).class_id == s.class_id)
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(eval.entries.size());
}

} // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    if (config.output_dir.empty())
        throw DataError("output directory not set");

    const Raster original = read_raster(config.raster_path);
    const LabelMask truth = read_label_mask(config.labels_path);
    if (truth.width != original.width || truth.height != original.height)
        throw DataError("truth mask dimensions do not match raster");

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec)
        throw DataError("cannot create output directory '" + config.output_dir +
                        "': " + ec.message());
    const auto out_path = [&](const char* name) {
        return (std::filesystem::path(config.output_dir) / name).string();
    };

    const bool isotropic =
        config.rho == 0.0 &&
        (!config.sigma_y || *config.sigma_y == config.sigma);
    const GaussianKernel kernel =
        isotropic ? build_kernel_1d(config.sigma, config.truncation)
                  : build_kernel_2d(config.sigma,
                                    config.sigma_y.value_or(config.sigma),
                                    config.rho, config.truncation);
    const Raster transformed = apply_transform(original, kernel, config.boundary);

    // Band redundancy judged on the smoothed image; both branches then
    // classify the same retained subset.
    const BandStatistics stats = band_statistics(transformed);
    const PcaResult pca = principal_components(stats);
    const BandSelection selection = select_bands(stats, config.pca_threshold);

    const TrainingSet sampled =
        stratified_sample(truth, original, config.per_class, config.seed);
    const auto [train_full, eval_full] =
        split_train_eval(sampled, config.train_fraction, config.seed);

    PipelineResult result;
    result.retained_bands = selection.retained;
    std::vector<std::string>& outputs = result.outputs;

    json pca_doc;
    pca_doc["seed"] = config.seed;
    pca_doc["band_names"] = transformed.band_names;
    pca_doc["eigenvalues"] = pca.eigenvalues;
    pca_doc["variance_explained"] = pca.variance_explained;
    json corr = json::array();
    for (int i = 0; i < original.bands; ++i) {
        json row = json::array();
        for (int j = 0; j < original.bands; ++j)
            row.push_back(stats.correlation(i, j));
        corr.push_back(std::move(row));
    }
    pca_doc["correlation"] = std::move(corr);
    pca_doc["threshold"] = config.pca_threshold;
    pca_doc["retained_bands"] = selection.retained;
    json drops = json::array();
    for (const BandDrop& drop : selection.drops) {
        json entry;
        entry["kept"] = drop.kept;
        entry["dropped"] = drop.dropped;
        entry["correlation"] = drop.correlation;
        drops.push_back(std::move(entry));
    }
    pca_doc["drops"] = std::move(drops);
    save_json(pca_doc, out_path("pca.json"), outputs);

    struct Branch {
        const char* tag;
        const Raster* raster;
    };
    const Branch branches[2] = {{"before", &original}, {"after", &transformed}};
    BranchResult* slots[2] = {&result.before, &result.after};

    for (int bi = 0; bi < 2; ++bi) {
        const Branch& branch = branches[bi];
        const TrainingSet train =
            resample_features(train_full, *branch.raster, &selection.retained);
        const TrainingSet eval =
            resample_features(eval_full, *branch.raster, &selection.retained);
        ClassModelSet models =
            fit_class_models(train, config.priors, config.regularization);
        models.threshold = config.threshold;

        const LabelMask predicted = classify_raster(*branch.raster, models,
                                                    &selection.retained,
                                                    &truth.class_table);
        BranchResult& slot = *slots[bi];
        slot.confusion = confusion_matrix(predicted, truth);
        const AccuracyReport accuracy = accuracy_report(slot.confusion);
        slot.overall_accuracy = accuracy.overall_accuracy;
        slot.kappa = accuracy.kappa;
        slot.holdout_accuracy = holdout_accuracy(eval, models);

        const std::string prefix(branch.tag);
        const std::string classmap = out_path((prefix + "_classmap").c_str());
        write_label_mask(predicted, classmap, original.pixel_size);
        outputs.push_back(classmap + ".hdr.json");
        write_confusion_csv(slot.confusion,
                            out_path((prefix + "_confusion.csv").c_str()));
        outputs.push_back(out_path((prefix + "_confusion.csv").c_str()));
        save_json(accuracy_to_json(accuracy, slot.confusion,
                                   slot.holdout_accuracy, config.seed),
                  out_path((prefix + "_accuracy.json").c_str()), outputs);
        save_json(area_to_json(area_report(predicted, original.pixel_size),
                               config.seed),
                  out_path((prefix + "_area.json").c_str()), outputs);
    }

    result.delta_oa_pp =
        (result.after.overall_accuracy - result.before.overall_accuracy) * 100.0;
    if (result.before.kappa && result.after.kappa)
        result.delta_kappa = *result.after.kappa - *result.before.kappa;

    json delta;
    delta["seed"] = config.seed;
    delta["sigma"] = config.sigma;
    delta["boundary"] = to_string(config.boundary);
    delta["pca_threshold"] = config.pca_threshold;
    delta["per_class"] = config.per_class;
    delta["train_fraction"] = config.train_fraction;
    delta["priors"] = to_string(config.priors);
    delta["regularization"] = config.regularization;
    delta["retained_bands"] = selection.retained;
    delta["before_overall_accuracy"] = result.before.overall_accuracy;
    delta["after_overall_accuracy"] = result.after.overall_accuracy;
    delta["before_kappa"] = optional_to_json(result.before.kappa);
    delta["after_kappa"] = optional_to_json(result.after.kappa);
    delta["before_holdout_accuracy"] = result.before.holdout_accuracy;
    delta["after_holdout_accuracy"] = result.after.holdout_accuracy;
    delta["delta_oa_pp"] = result.delta_oa_pp;
    delta["delta_kappa"] = optional_to_json(result.delta_kappa);
    save_json(delta, out_path("delta.json"), outputs);

    return result;
}

} // namespace specclass
