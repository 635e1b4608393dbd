#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specclass/errors.hpp"
#include "specclass/evaluation.hpp"
#include "specclass/mlc.hpp"
#include "specclass/pca.hpp"
#include "specclass/pipeline.hpp"
#include "specclass/raster.hpp"
#include "specclass/sampling.hpp"
#include "specclass/scenegen.hpp"
#include "specclass/spectral_stats.hpp"
#include "specclass/weierstrass.hpp"

namespace {

using nlohmann::json;
using namespace specclass;

std::string fmt(const char* format, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), format, value);
    return buffer;
}

std::string full(double value) { return fmt("%.17g", value); }

void emit_json(const json& doc, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw DataError("cannot open '" + out_path + "' for writing");
    out << doc.dump(2) << "\n";
    if (!out)
        throw DataError("failed writing '" + out_path + "'");
}

json optional_to_json(const std::optional<double>& value) {
    if (value)
        return *value;
    return nullptr;
}

std::vector<int> parse_band_list(const Raster& raster, const std::string& flag) {
    std::vector<int> bands;
    if (flag.empty()) {
        for (int b = 0; b < raster.bands; ++b)
            bands.push_back(b);
        return bands;
    }
    std::istringstream in(flag);
    std::string token;
    while (std::getline(in, token, ',')) {
        try {
            bands.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw DataError("invalid band index '" + token + "'");
        }
    }
    if (bands.empty())
        throw DataError("band list is empty");
    return bands;
}

void write_samples_csv(const TrainingSet& set, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot open '" + path + "' for writing");
    out << "row,col,class_id";
    for (int b = 0; b < set.band_count; ++b)
        out << ",b" << b;
    out << "\n";
    for (const TrainingSample& s : set.entries) {
        out << s.row << "," << s.col << "," << s.class_id;
        for (double v : s.features)
            out << "," << full(v);
        out << "\n";
    }
    if (!out)
        throw DataError("failed writing '" + path + "'");
}

TrainingSet read_samples_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw DataError("'" + path + "' is empty");

    TrainingSet set;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::istringstream split(line);
        std::string token;
        while (std::getline(split, token, ','))
            fields.push_back(token);
        if (fields.size() < 4) {
            std::ostringstream msg;
            msg << "'" << path << "' line " << line_no << ": expected row,col,class_id,b0,...";
            throw DataError(msg.str());
        }
        try {
            TrainingSample s;
            s.row = std::stoi(fields[0]);
            s.col = std::stoi(fields[1]);
            s.class_id = static_cast<std::uint32_t>(std::stoul(fields[2]));
            for (std::size_t i = 3; i < fields.size(); ++i)
                s.features.push_back(std::stod(fields[i]));
            if (set.entries.empty())
                set.band_count = static_cast<int>(s.features.size());
            else if (static_cast<int>(s.features.size()) != set.band_count)
                throw DataError("'" + path + "' has rows with differing band counts");
            set.per_class_counts[s.class_id] += 1;
            set.entries.push_back(std::move(s));
        } catch (const DataError&) {
            throw;
        } catch (const std::exception&) {
            std::ostringstream msg;
            msg << "'" << path << "' line " << line_no << ": malformed value";
            throw DataError(msg.str());
        }
    }
    if (set.entries.empty())
        throw DataError("'" + path + "' holds no samples");
    return set;
}

json accuracy_to_json(const AccuracyReport& report, const ConfusionMatrix& cm) {
    json doc;
    doc["overall_accuracy"] = report.overall_accuracy;
    doc["kappa"] = optional_to_json(report.kappa);
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

json area_to_json(const AreaReport& report) {
    json doc;
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

int run(int argc, char** argv) {
    CLI::App app{"Multispectral preprocessing and maximum-likelihood classification"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic scene from a JSON spec");
    std::string synth_spec_path;
    std::string synth_prefix;
    std::optional<std::uint64_t> synth_seed;
    synth->add_option("spec", synth_spec_path, "Scene spec JSON")->required();
    synth->add_option("out_prefix", synth_prefix, "Output path prefix")->required();
    synth->add_option("--seed", synth_seed, "Override the spec's seed");
    synth->callback([&] {
        SceneSpec spec = read_scene_spec(synth_spec_path);
        if (synth_seed)
            spec.seed = *synth_seed;
        auto [raster, mask] = generate_scene(spec);
        write_raster(raster, synth_prefix);
        write_label_mask(mask, synth_prefix + "_truth", spec.pixel_size_m);
        std::cout << "wrote " << synth_prefix << ".hdr.json and "
                  << synth_prefix << "_truth.hdr.json\n";
    });

    // histogram
    auto* histogram = app.add_subcommand("histogram", "Per-band histograms");
    std::string hist_input;
    int hist_bins = 256;
    int hist_band = -1;
    std::string hist_out;
    std::string hist_csv;
    histogram->add_option("input", hist_input, "Input raster")->required();
    histogram->add_option("--bins", hist_bins, "Bin count")->check(CLI::PositiveNumber);
    histogram->add_option("--band", hist_band, "Single band (default: all)");
    histogram->add_option("--out", hist_out, "Write JSON here instead of stdout");
    histogram->add_option("--csv", hist_csv, "Also write band,bin_lo,bin_hi,count CSV");
    histogram->callback([&] {
        const Raster raster = read_raster(hist_input);
        std::vector<int> bands;
        if (hist_band >= 0)
            bands.push_back(hist_band);
        else
            for (int b = 0; b < raster.bands; ++b)
                bands.push_back(b);
        json doc;
        json list = json::array();
        std::vector<Histogram> results;
        for (int b : bands) {
            Histogram h = band_histogram(raster, b, hist_bins);
            json entry;
            entry["band"] = h.band_index;
            entry["name"] = raster.band_names[static_cast<std::size_t>(b)];
            entry["bin_edges"] = h.bin_edges;
            entry["counts"] = h.counts;
            list.push_back(std::move(entry));
            results.push_back(std::move(h));
        }
        doc["bands"] = std::move(list);
        emit_json(doc, hist_out);
        if (!hist_csv.empty()) {
            std::ofstream csv(hist_csv, std::ios::binary);
            if (!csv)
                throw DataError("cannot open '" + hist_csv + "' for writing");
            csv << "band,bin_lo,bin_hi,count\n";
            for (const Histogram& h : results)
                for (std::size_t i = 0; i < h.counts.size(); ++i)
                    csv << h.band_index << "," << full(h.bin_edges[i]) << ","
                        << full(h.bin_edges[i + 1]) << "," << h.counts[i] << "\n";
        }
    });

    // moments
    auto* moments = app.add_subcommand("moments", "Per-band moments and normality verdicts");
    std::string mom_input;
    int mom_band = -1;
    std::string mom_out;
    MomentsThresholds mom_thresholds;
    moments->add_option("input", mom_input, "Input raster")->required();
    moments->add_option("--band", mom_band, "Single band (default: all)");
    moments->add_option("--skew-threshold", mom_thresholds.skewness,
                        "Absolute skewness limit for the normal verdict");
    moments->add_option("--kurtosis-threshold", mom_thresholds.excess_kurtosis,
                        "Absolute excess kurtosis limit for the normal verdict");
    moments->add_option("--out", mom_out, "Write JSON here instead of stdout");
    moments->callback([&] {
        const Raster raster = read_raster(mom_input);
        std::vector<int> bands;
        if (mom_band >= 0)
            bands.push_back(mom_band);
        else
            for (int b = 0; b < raster.bands; ++b)
                bands.push_back(b);
        json doc;
        json list = json::array();
        for (int b : bands) {
            const MomentsReport r = band_moments(raster, b, mom_thresholds);
            json entry;
            entry["band"] = b;
            entry["name"] = raster.band_names[static_cast<std::size_t>(b)];
            entry["mean"] = r.mean;
            entry["variance"] = r.variance;
            entry["skewness"] = r.skewness;
            entry["excess_kurtosis"] = r.excess_kurtosis;
            entry["verdict"] = to_string(r.verdict);
            list.push_back(std::move(entry));
        }
        doc["bands"] = std::move(list);
        emit_json(doc, mom_out);
    });

    // transform
    auto* transform = app.add_subcommand("transform", "Gaussian smoothing of every band");
    std::string tr_input;
    std::string tr_output;
    double tr_sigma = 1.4142135623730951;
    std::optional<double> tr_sigma_y;
    double tr_rho = 0.0;
    double tr_truncation = 3.0;
    std::string tr_boundary = "reflect";
    transform->add_option("input", tr_input, "Input raster")->required();
    transform->add_option("output", tr_output, "Output raster prefix")->required();
    transform->add_option("--sigma", tr_sigma, "Gaussian sigma in pixels (x direction)");
    transform->add_option("--sigma-y", tr_sigma_y, "Gaussian sigma in y (default: sigma)");
    transform->add_option("--rho", tr_rho, "Correlation of the 2-D kernel");
    transform->add_option("--truncation", tr_truncation, "Kernel radius in sigmas");
    transform->add_option("--boundary", tr_boundary, "reflect|replicate|zero");
    transform->callback([&] {
        const Raster raster = read_raster(tr_input);
        const bool isotropic = tr_rho == 0.0 && (!tr_sigma_y || *tr_sigma_y == tr_sigma);
        const GaussianKernel kernel =
            isotropic ? build_kernel_1d(tr_sigma, tr_truncation)
                      : build_kernel_2d(tr_sigma, tr_sigma_y.value_or(tr_sigma),
                                        tr_rho, tr_truncation);
        const Raster out = apply_transform(raster, kernel,
                                           boundary_from_string(tr_boundary));
        write_raster(out, tr_output);
        std::cout << "wrote " << strip_raster_suffix(tr_output) << ".hdr.json\n";
    });

    // pca
    auto* pca_cmd = app.add_subcommand("pca", "Band covariance, eigenstructure, redundancy");
    std::string pca_input;
    std::string pca_labels;
    std::string pca_out;
    double pca_threshold = 0.95;
    pca_cmd->add_option("input", pca_input, "Input raster")->required();
    pca_cmd->add_option("--labels", pca_labels, "Restrict statistics to labeled pixels");
    pca_cmd->add_option("--threshold", pca_threshold, "Correlation cutoff for dropping a band");
    pca_cmd->add_option("--out", pca_out, "Write JSON here instead of stdout");
    pca_cmd->callback([&] {
        const Raster raster = read_raster(pca_input);
        std::optional<LabelMask> mask;
        if (!pca_labels.empty())
            mask = read_label_mask(pca_labels);
        const BandStatistics stats =
            band_statistics(raster, mask ? &*mask : nullptr);
        const PcaResult pca = principal_components(stats);
        const BandSelection selection = select_bands(stats, pca_threshold);
        json doc;
        doc["band_names"] = raster.band_names;
        doc["means"] = stats.means;
        doc["eigenvalues"] = pca.eigenvalues;
        doc["variance_explained"] = pca.variance_explained;
        json corr = json::array();
        json cov = json::array();
        for (int i = 0; i < raster.bands; ++i) {
            json crow = json::array();
            json vrow = json::array();
            for (int j = 0; j < raster.bands; ++j) {
                crow.push_back(stats.correlation(i, j));
                vrow.push_back(stats.covariance(i, j));
            }
            corr.push_back(std::move(crow));
            cov.push_back(std::move(vrow));
        }
        doc["correlation"] = std::move(corr);
        doc["covariance"] = std::move(cov);
        doc["threshold"] = pca_threshold;
        doc["retained_bands"] = selection.retained;
        json drops = json::array();
        for (const BandDrop& drop : selection.drops) {
            json entry;
            entry["kept"] = drop.kept;
            entry["dropped"] = drop.dropped;
            entry["correlation"] = drop.correlation;
            drops.push_back(std::move(entry));
        }
        doc["drops"] = std::move(drops);
        emit_json(doc, pca_out);
    });

    // sample
    auto* sample = app.add_subcommand("sample", "Stratified training/evaluation sampling");
    std::string sm_labels;
    std::string sm_image;
    std::size_t sm_per_class = 500;
    std::uint64_t sm_seed = 42;
    double sm_fraction = 0.7;
    std::string sm_prefix = "samples";
    sample->add_option("labels", sm_labels, "Truth label mask")->required();
    sample->add_option("image", sm_image, "Raster supplying the features")->required();
    sample->add_option("--per-class", sm_per_class, "Pixels drawn per class");
    sample->add_option("--seed", sm_seed, "PRNG seed");
    sample->add_option("--train-fraction", sm_fraction, "Share of each class kept for training");
    sample->add_option("--out-prefix", sm_prefix, "Prefix for <prefix>_train.csv / <prefix>_eval.csv");
    sample->callback([&] {
        const LabelMask labels = read_label_mask(sm_labels);
        const Raster raster = read_raster(sm_image);
        const TrainingSet set = stratified_sample(labels, raster, sm_per_class, sm_seed);
        const auto [train, eval] = split_train_eval(set, sm_fraction, sm_seed);
        write_samples_csv(train, sm_prefix + "_train.csv");
        write_samples_csv(eval, sm_prefix + "_eval.csv");
        std::cout << "wrote " << sm_prefix << "_train.csv (" << train.entries.size()
                  << " rows) and " << sm_prefix << "_eval.csv ("
                  << eval.entries.size() << " rows)\n";
    });

    // train
    auto* train_cmd = app.add_subcommand("train", "Fit per-class Gaussian models from a sample CSV");
    std::string trn_csv;
    std::string trn_model;
    std::string trn_priors = "uniform";
    double trn_lambda = 1e-6;
    std::optional<double> trn_threshold;
    train_cmd->add_option("samples", trn_csv, "Training CSV (row,col,class_id,b0,...)")->required();
    train_cmd->add_option("model", trn_model, "Output model JSON")->required();
    train_cmd->add_option("--priors", trn_priors, "uniform|proportional");
    train_cmd->add_option("--regularization", trn_lambda, "Ridge factor on the covariance diagonal");
    train_cmd->add_option("--threshold", trn_threshold, "Log-discriminant rejection threshold");
    train_cmd->callback([&] {
        const TrainingSet set = read_samples_csv(trn_csv);
        ClassModelSet models =
            fit_class_models(set, priors_mode_from_string(trn_priors), trn_lambda);
        models.threshold = trn_threshold;
        write_model_set(models, trn_model);
        std::cout << "wrote " << trn_model << " (" << models.models.size()
                  << " classes, " << models.band_count << " bands)\n";
    });

    // classify
    auto* classify = app.add_subcommand("classify", "Label every pixel with a trained model");
    std::string cl_image;
    std::string cl_model;
    std::string cl_output;
    std::string cl_bands;
    std::string cl_classes;
    classify->add_option("image", cl_image, "Input raster")->required();
    classify->add_option("model", cl_model, "Model JSON from train")->required();
    classify->add_option("output", cl_output, "Output class map prefix")->required();
    classify->add_option("--bands", cl_bands, "Comma-separated band subset (default: all)");
    classify->add_option("--classes", cl_classes, "Class table JSON for names/colors");
    classify->callback([&] {
        const Raster raster = read_raster(cl_image);
        const ClassModelSet models = read_model_set(cl_model);
        const std::vector<int> bands = parse_band_list(raster, cl_bands);
        std::optional<ClassTable> table;
        if (!cl_classes.empty())
            table = read_class_table(cl_classes);
        const LabelMask predicted =
            classify_raster(raster, models, &bands, table ? &*table : nullptr);
        write_label_mask(predicted, cl_output, raster.pixel_size);
        std::cout << "wrote " << strip_raster_suffix(cl_output) << ".hdr.json\n";
    });

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Confusion matrix, accuracy, kappa, areas");
    std::string ev_predicted;
    std::string ev_truth;
    std::string ev_out;
    std::string ev_csv;
    std::optional<double> ev_pixel_size;
    evaluate->add_option("predicted", ev_predicted, "Predicted class map")->required();
    evaluate->add_option("truth", ev_truth, "Ground-truth label mask")->required();
    evaluate->add_option("--out", ev_out, "Write the JSON report here instead of stdout");
    evaluate->add_option("--csv", ev_csv, "Write the confusion matrix as CSV");
    evaluate->add_option("--pixel-size", ev_pixel_size,
                         "Override the predicted header's pixel size for areas");
    evaluate->callback([&] {
        const Raster predicted_raster = read_raster(ev_predicted);
        const ClassTable predicted_table =
            read_class_table(strip_raster_suffix(ev_predicted) + ".classes.json");
        const LabelMask predicted = as_label_mask(predicted_raster, predicted_table);
        const LabelMask truth = read_label_mask(ev_truth);
        const ConfusionMatrix cm = confusion_matrix(predicted, truth);
        const AccuracyReport accuracy = accuracy_report(cm);
        const AreaReport areas = area_report(
            predicted, ev_pixel_size.value_or(predicted_raster.pixel_size));
        json doc;
        doc["accuracy"] = accuracy_to_json(accuracy, cm);
        doc["area"] = area_to_json(areas);
        emit_json(doc, ev_out);
        if (!ev_csv.empty())
            write_confusion_csv(cm, ev_csv);
        if (!ev_out.empty()) {
            std::cout << "overall accuracy "
                      << fmt("%.2f", accuracy.overall_accuracy * 100.0) << "%";
            if (accuracy.kappa)
                std::cout << ", kappa " << fmt("%.4f", *accuracy.kappa);
            std::cout << "\n";
        }
    });

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "Before/after comparison in one shot");
    PipelineConfig pc;
    std::string pl_boundary = "reflect";
    std::string pl_priors = "uniform";
    pipeline->add_option("image", pc.raster_path, "Input raster")->required();
    pipeline->add_option("labels", pc.labels_path, "Ground-truth label mask")->required();
    pipeline->add_option("output_dir", pc.output_dir, "Report directory")->required();
    pipeline->add_option("--sigma", pc.sigma, "Gaussian sigma in pixels");
    pipeline->add_option("--sigma-y", pc.sigma_y, "Gaussian sigma in y (default: sigma)");
    pipeline->add_option("--rho", pc.rho, "Correlation of the 2-D kernel");
    pipeline->add_option("--truncation", pc.truncation, "Kernel radius in sigmas");
    pipeline->add_option("--boundary", pl_boundary, "reflect|replicate|zero");
    pipeline->add_option("--pca-threshold", pc.pca_threshold, "Correlation cutoff for dropping a band");
    pipeline->add_option("--per-class", pc.per_class, "Training pixels drawn per class");
    pipeline->add_option("--train-fraction", pc.train_fraction, "Share of samples used to fit");
    pipeline->add_option("--priors", pl_priors, "uniform|proportional");
    pipeline->add_option("--regularization", pc.regularization, "Ridge factor on the covariance diagonal");
    pipeline->add_option("--threshold", pc.threshold, "Log-discriminant rejection threshold");
    pipeline->add_option("--seed", pc.seed, "PRNG seed");
    pipeline->callback([&] {
        pc.boundary = boundary_from_string(pl_boundary);
        pc.priors = priors_mode_from_string(pl_priors);
        const PipelineResult result = run_pipeline(pc);
        std::cout << "retained bands:";
        for (int b : result.retained_bands)
            std::cout << " " << b;
        std::cout << "\n";
        std::cout << "before: OA " << fmt("%.2f", result.before.overall_accuracy * 100.0) << "%";
        if (result.before.kappa)
            std::cout << ", kappa " << fmt("%.4f", *result.before.kappa);
        std::cout << "\n";
        std::cout << "after:  OA " << fmt("%.2f", result.after.overall_accuracy * 100.0) << "%";
        if (result.after.kappa)
            std::cout << ", kappa " << fmt("%.4f", *result.after.kappa);
        std::cout << "\n";
        std::cout << "delta:  " << fmt("%+.2f", result.delta_oa_pp) << " pp";
        if (result.delta_kappa)
            std::cout << ", kappa " << fmt("%+.4f", *result.delta_kappa);
        std::cout << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const specclass::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const specclass::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
