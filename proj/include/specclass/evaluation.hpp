#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specclass/raster.hpp"

namespace specclass {

// Rows are predicted classes in class_ids order plus a trailing row for
// unclassified (predicted 0); columns are truth classes in the same order.
// Only pixels with nonzero truth labels are counted.
struct ConfusionMatrix {
    std::vector<std::uint32_t> class_ids;
    std::vector<std::int64_t> counts; // (C+1) x C, row-major
    std::int64_t total = 0;

    std::int64_t at(std::size_t predicted_row, std::size_t truth_col) const {
        return counts[predicted_row * class_ids.size() + truth_col];
    }
};

struct AccuracyReport {
    double overall_accuracy = 0.0;
    std::optional<double> kappa;
    std::vector<std::optional<double>> producer_accuracy;
    std::vector<std::optional<double>> user_accuracy;
};

struct AreaRow {
    std::uint32_t class_id = 0;
    std::string name;
    std::int64_t pixel_count = 0;
    double percent = 0.0;
    double area_m2 = 0.0;
};

struct AreaReport {
    std::vector<AreaRow> rows; // id 0 first, then ascending
    std::int64_t total_pixels = 0;
    double pixel_size_m = 0.0;
};

ConfusionMatrix confusion_matrix(const LabelMask& predicted, const LabelMask& truth);

AccuracyReport accuracy_report(const ConfusionMatrix& matrix);

AreaReport area_report(const LabelMask& mask, double pixel_size_m);

void write_confusion_csv(const ConfusionMatrix& matrix, const std::string& path);

} // namespace specclass
