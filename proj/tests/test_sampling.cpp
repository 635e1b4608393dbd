#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "specclass/errors.hpp"
#include "specclass/sampling.hpp"
#include "test_util.hpp"

using namespace specclass;

namespace {

// Left half class 1, right half class 2, a 4x4 block of class 3, and an
// unlabeled strip along the bottom.
LabelMask checkered_mask(int width, int height) {
    LabelMask mask;
    mask.width = width;
    mask.height = height;
    mask.labels.assign(static_cast<std::size_t>(width) * height, 0);
    for (int row = 0; row < height - 2; ++row)
        for (int col = 0; col < width; ++col)
            mask.at(row, col) = col < width / 2 ? 1 : 2;
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col)
            mask.at(row, col) = 3;
    mask.class_table[1] = ClassInfo{"left", {1, 0, 0}};
    mask.class_table[2] = ClassInfo{"right", {0, 1, 0}};
    mask.class_table[3] = ClassInfo{"block", {0, 0, 1}};
    return mask;
}

} // namespace

TEST_CASE("stratified sample draws the requested count per class") {
    const LabelMask mask = checkered_mask(32, 32);
    const Raster raster = testutil::random_raster(32, 32, 3, 7);
    const TrainingSet set = stratified_sample(mask, raster, 10, 42);

    CHECK(set.band_count == 3);
    CHECK(set.seed == 42);
    CHECK(set.entries.size() == 30);
    REQUIRE(set.per_class_counts.size() == 3);
    for (const auto& [id, count] : set.per_class_counts)
        CHECK(count == 10);

    std::map<std::uint32_t, std::set<std::pair<int, int>>> seen;
    for (const TrainingSample& s : set.entries) {
        CHECK(mask.at(s.row, s.col) == s.class_id);
        CHECK(seen[s.class_id].insert({s.row, s.col}).second); // no repeats
        REQUIRE(s.features.size() == 3);
        for (int b = 0; b < 3; ++b)
            CHECK(s.features[static_cast<std::size_t>(b)] == raster.at(b, s.row, s.col));
    }

    // entries grouped by ascending class id
    std::vector<std::uint32_t> order;
    for (const TrainingSample& s : set.entries)
        if (order.empty() || order.back() != s.class_id)
            order.push_back(s.class_id);
    CHECK(order == std::vector<std::uint32_t>{1, 2, 3});
}

TEST_CASE("sampling is deterministic in the seed") {
    const LabelMask mask = checkered_mask(16, 16);
    const Raster raster = testutil::random_raster(16, 16, 2, 3);
    const TrainingSet a = stratified_sample(mask, raster, 5, 9);
    const TrainingSet b = stratified_sample(mask, raster, 5, 9);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].row == b.entries[i].row);
        CHECK(a.entries[i].col == b.entries[i].col);
        CHECK(a.entries[i].class_id == b.entries[i].class_id);
    }

    const TrainingSet c = stratified_sample(mask, raster, 5, 10);
    bool differs = false;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        if (a.entries[i].row != c.entries[i].row || a.entries[i].col != c.entries[i].col)
            differs = true;
    CHECK(differs);
}

TEST_CASE("undersized stratum error names the class") {
    const LabelMask mask = checkered_mask(16, 16); // class 3 holds 16 pixels
    const Raster raster = testutil::random_raster(16, 16, 1, 3);
    try {
        (void)stratified_sample(mask, raster, 17, 1);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("class 3") != std::string::npos);
    }
}

TEST_CASE("sampling argument validation") {
    const LabelMask mask = checkered_mask(16, 16);
    const Raster raster = testutil::random_raster(16, 16, 1, 3);
    CHECK_THROWS_AS((void)stratified_sample(mask, raster, 0, 1), DataError);

    const Raster wrong = testutil::random_raster(8, 16, 1, 3);
    CHECK_THROWS_AS((void)stratified_sample(mask, wrong, 4, 1), DataError);

    LabelMask empty;
    empty.width = 16;
    empty.height = 16;
    empty.labels.assign(256, 0);
    CHECK_THROWS_AS((void)stratified_sample(empty, raster, 4, 1), DataError);
}

TEST_CASE("split keeps the per-class ratio and both sides nonempty") {
    const LabelMask mask = checkered_mask(32, 32);
    const Raster raster = testutil::random_raster(32, 32, 2, 5);
    const TrainingSet set = stratified_sample(mask, raster, 10, 42);
    const auto [train, eval] = split_train_eval(set, 0.7, 42);

    for (const auto& [id, count] : train.per_class_counts)
        CHECK(count == 7); // lround(0.7 * 10)
    for (const auto& [id, count] : eval.per_class_counts)
        CHECK(count == 3);

    // partition: every original entry lands in exactly one side,
    // preserving relative order
    std::size_t ti = 0;
    std::size_t ei = 0;
    auto same = [](const TrainingSample& a, const TrainingSample& b) {
        return a.row == b.row && a.col == b.col && a.class_id == b.class_id;
    };
    for (const TrainingSample& s : set.entries) {
        if (ti < train.entries.size() && same(train.entries[ti], s))
            ++ti;
        else if (ei < eval.entries.size() && same(eval.entries[ei], s))
            ++ei;
        else
            FAIL("entry missing from both splits");
    }
    CHECK(ti == train.entries.size());
    CHECK(ei == eval.entries.size());
}

TEST_CASE("split clamps so neither side is empty") {
    const LabelMask mask = checkered_mask(32, 32);
    const Raster raster = testutil::random_raster(32, 32, 1, 5);
    const TrainingSet set = stratified_sample(mask, raster, 3, 1);
    const auto [train_low, eval_low] = split_train_eval(set, 0.01, 1);
    for (const auto& [id, count] : train_low.per_class_counts)
        CHECK(count == 1);
    const auto [train_high, eval_high] = split_train_eval(set, 0.99, 1);
    for (const auto& [id, count] : eval_high.per_class_counts)
        CHECK(count == 1);
}

TEST_CASE("split rejects bad fractions and tiny classes") {
    const LabelMask mask = checkered_mask(32, 32);
    const Raster raster = testutil::random_raster(32, 32, 1, 5);
    const TrainingSet set = stratified_sample(mask, raster, 4, 1);
    CHECK_THROWS_AS((void)split_train_eval(set, 0.0, 1), DataError);
    CHECK_THROWS_AS((void)split_train_eval(set, 1.0, 1), DataError);

    TrainingSet lone;
    lone.band_count = 1;
    lone.entries.push_back(TrainingSample{0, 0, 5, {1.0}});
    try {
        (void)split_train_eval(lone, 0.5, 1);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("class 5") != std::string::npos);
    }
}

TEST_CASE("resample_features re-reads the same coordinates elsewhere") {
    const LabelMask mask = checkered_mask(16, 16);
    const Raster raster = testutil::random_raster(16, 16, 4, 3);
    const Raster other = testutil::random_raster(16, 16, 4, 4);
    const TrainingSet set = stratified_sample(mask, raster, 6, 2);

    const std::vector<int> subset = {0, 2};
    const TrainingSet projected = resample_features(set, other, &subset);
    CHECK(projected.band_count == 2);
    REQUIRE(projected.entries.size() == set.entries.size());
    for (std::size_t i = 0; i < set.entries.size(); ++i) {
        const TrainingSample& src = set.entries[i];
        const TrainingSample& dst = projected.entries[i];
        CHECK(dst.row == src.row);
        CHECK(dst.col == src.col);
        CHECK(dst.class_id == src.class_id);
        REQUIRE(dst.features.size() == 2);
        CHECK(dst.features[0] == other.at(0, src.row, src.col));
        CHECK(dst.features[1] == other.at(2, src.row, src.col));
    }

    const std::vector<int> bad = {0, 9};
    CHECK_THROWS_AS((void)resample_features(set, other, &bad), DataError);
}
