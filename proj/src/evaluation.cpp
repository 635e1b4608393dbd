#include "specclass/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "specclass/errors.hpp"

namespace specclass {

ConfusionMatrix confusion_matrix(const LabelMask& predicted, const LabelMask& truth) {
    if (predicted.width != truth.width || predicted.height != truth.height)
        throw DataError("predicted and truth masks have different dimensions");

    // Ids seen on evaluated pixels, from either mask, so every prediction
    // has a row and every truth label a column.
    std::set<std::uint32_t> ids;
    const std::size_t n = truth.labels.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (truth.labels[i] == 0)
            continue;
        ids.insert(truth.labels[i]);
        if (predicted.labels[i] != 0)
            ids.insert(predicted.labels[i]);
    }
    if (ids.empty())
        throw DataError("truth mask has no labeled pixels");

    ConfusionMatrix cm;
    cm.class_ids.assign(ids.begin(), ids.end());
    const std::size_t c = cm.class_ids.size();
    cm.counts.assign((c + 1) * c, 0);

    std::map<std::uint32_t, std::size_t> index;
    for (std::size_t k = 0; k < c; ++k)
        index[cm.class_ids[k]] = k;

    for (std::size_t i = 0; i < n; ++i) {
        if (truth.labels[i] == 0)
            continue;
        const std::size_t col = index[truth.labels[i]];
        const std::size_t row =
            predicted.labels[i] == 0 ? c : index[predicted.labels[i]];
        cm.counts[row * c + col] += 1;
        cm.total += 1;
    }
    return cm;
}

AccuracyReport accuracy_report(const ConfusionMatrix& matrix) {
    const std::size_t c = matrix.class_ids.size();
    if (matrix.total <= 0)
        throw DataError("confusion matrix is empty");

    std::vector<std::int64_t> row_sum(c + 1, 0);
    std::vector<std::int64_t> col_sum(c, 0);
    std::int64_t diag = 0;
    for (std::size_t r = 0; r <= c; ++r)
        for (std::size_t k = 0; k < c; ++k) {
            const std::int64_t v = matrix.at(r, k);
            row_sum[r] += v;
            col_sum[k] += v;
            if (r == k)
                diag += v;
        }

    AccuracyReport report;
    const auto total = static_cast<double>(matrix.total);
    report.overall_accuracy = static_cast<double>(diag) / total;

    // Chance agreement pairs class rows with their columns; the
    // unclassified row never matches a column, so it adds no term.
    double p_e = 0.0;
    for (std::size_t k = 0; k < c; ++k)
        p_e += static_cast<double>(row_sum[k]) * static_cast<double>(col_sum[k]) /
               (total * total);
    if (p_e < 1.0)
        report.kappa = (report.overall_accuracy - p_e) / (1.0 - p_e);

    report.producer_accuracy.resize(c);
    report.user_accuracy.resize(c);
    for (std::size_t k = 0; k < c; ++k) {
        if (col_sum[k] > 0)
            report.producer_accuracy[k] =
                static_cast<double>(matrix.at(k, k)) / static_cast<double>(col_sum[k]);
        if (row_sum[k] > 0)
            report.user_accuracy[k] =
                static_cast<double>(matrix.at(k, k)) / static_cast<double>(row_sum[k]);
    }
    return report;
}

AreaReport area_report(const LabelMask& mask, double pixel_size_m) {
    if (!(pixel_size_m > 0.0))
        throw DataError("pixel size must be positive");
    if (mask.labels.empty())
        throw DataError("label mask is empty");

    std::map<std::uint32_t, std::int64_t> counts;
    counts[0] = 0;
    for (const auto& [id, info] : mask.class_table)
        counts[id] = 0;
    for (std::uint32_t id : mask.labels)
        counts[id] += 1;

    AreaReport report;
    report.total_pixels = static_cast<std::int64_t>(mask.labels.size());
    report.pixel_size_m = pixel_size_m;
    const auto total = static_cast<double>(report.total_pixels);
    for (const auto& [id, count] : counts) {
        AreaRow row;
        row.class_id = id;
        auto it = mask.class_table.find(id);
        if (it != mask.class_table.end())
            row.name = it->second.name;
        else
            row.name = id == 0 ? "Unclassified" : "class_" + std::to_string(id);
        row.pixel_count = count;
        row.percent = static_cast<double>(count) / total * 100.0;
        row.area_m2 = static_cast<double>(count) * pixel_size_m * pixel_size_m;
        report.rows.push_back(std::move(row));
    }
    return report;
}

void write_confusion_csv(const ConfusionMatrix& matrix, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot open '" + path + "' for writing");
    const std::size_t c = matrix.class_ids.size();
    out << "predicted";
    for (std::uint32_t id : matrix.class_ids)
        out << ",truth_" << id;
    out << "\n";
    for (std::size_t r = 0; r <= c; ++r) {
        if (r < c)
            out << matrix.class_ids[r];
        else
            out << "unclassified";
        for (std::size_t k = 0; k < c; ++k)
            out << "," << matrix.at(r, k);
        out << "\n";
    }
    if (!out)
        throw DataError("failed writing '" + path + "'");
}

} // namespace specclass
