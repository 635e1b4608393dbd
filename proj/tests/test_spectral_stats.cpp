#include <doctest.h>

#include <cmath>
#include <numeric>

#include "specclass/errors.hpp"
#include "specclass/rng.hpp"
#include "specclass/spectral_stats.hpp"
#include "test_util.hpp"

using namespace specclass;

namespace {

Raster single_band(int width, int height, std::vector<double> values) {
    Raster r;
    r.width = width;
    r.height = height;
    r.bands = 1;
    r.band_names = {"b0"};
    r.data = std::move(values);
    return r;
}

} // namespace

TEST_CASE("moments of {0,0,0,1} match the hand computation") {
    const Raster r = single_band(2, 2, {0.0, 0.0, 0.0, 1.0});
    const MomentsReport m = band_moments(r, 0);
    CHECK(m.mean == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(m.variance == doctest::Approx(0.1875).epsilon(1e-15));
    // m3 = 0.09375, skew = m3 / m2^1.5 = 2/sqrt(3)
    CHECK(m.skewness == doctest::Approx(1.1547005383792517).epsilon(1e-13));
    CHECK(m.verdict == NormalityVerdict::Skewed);
}

TEST_CASE("constant band is degenerate, not an error") {
    const Raster r = single_band(4, 2, std::vector<double>(8, 3.25));
    const MomentsReport m = band_moments(r, 0);
    CHECK(m.verdict == NormalityVerdict::Degenerate);
    CHECK(m.mean == doctest::Approx(3.25));
    CHECK(m.variance == 0.0);
    CHECK(m.skewness == 0.0);
    CHECK(m.excess_kurtosis == 0.0);

    const Histogram h = band_histogram(r, 0, 16);
    CHECK(h.bin_edges.size() == 17);
    CHECK(h.bin_edges.front() < h.bin_edges.back());
    std::int64_t occupied = 0;
    std::int64_t total = 0;
    for (std::int64_t c : h.counts) {
        if (c > 0)
            ++occupied;
        total += c;
    }
    CHECK(occupied == 1);
    CHECK(total == 8);
}

TEST_CASE("gaussian synthetic band reads as approximately normal") {
    Raster r = single_band(100, 100, {});
    r.data.resize(10000);
    Rng rng(21);
    for (double& v : r.data)
        v = rng.normal(100.0, 15.0);
    const MomentsReport m = band_moments(r, 0);
    CHECK(m.verdict == NormalityVerdict::ApproximatelyNormal);
    CHECK(m.mean == doctest::Approx(100.0).epsilon(0.01));
    CHECK(std::sqrt(m.variance) == doctest::Approx(15.0).epsilon(0.05));
}

TEST_CASE("heavy-tailed data earns its verdict") {
    // Symmetric two-sided spikes: skewness ~0, excess kurtosis large.
    std::vector<double> values(1000, 0.0);
    for (std::size_t i = 0; i < 10; ++i) {
        values[i] = 50.0;
        values[i + 10] = -50.0;
    }
    const Raster r = single_band(100, 10, std::move(values));
    const MomentsReport m = band_moments(r, 0);
    CHECK(std::abs(m.skewness) < 0.5);
    CHECK(m.excess_kurtosis > 1.0);
    CHECK(m.verdict == NormalityVerdict::HeavyTailed);
}

TEST_CASE("histogram bins partition the value range") {
    const Raster r = single_band(2, 2, {0.0, 1.0, 2.0, 3.0});
    const Histogram h = band_histogram(r, 0, 2);
    REQUIRE(h.counts.size() == 2);
    REQUIRE(h.bin_edges.size() == 3);
    CHECK(h.bin_edges[0] == doctest::Approx(0.0));
    CHECK(h.bin_edges[2] == doctest::Approx(3.0));
    // 0, 1 below the midpoint edge; 2, 3 at or above (max lands in the
    // last bin, not past it).
    CHECK(h.counts[0] == 2);
    CHECK(h.counts[1] == 2);
}

TEST_CASE("histogram counts always sum to the pixel count") {
    const Raster r = testutil::random_raster(31, 17, 1, 77, -4.0, 9.0);
    for (int bins : {1, 7, 256}) {
        const Histogram h = band_histogram(r, 0, bins);
        CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::int64_t{0}) ==
              31 * 17);
    }
}

TEST_CASE("stats reject bad arguments") {
    const Raster r = single_band(2, 2, {0.0, 1.0, 2.0, 3.0});
    CHECK_THROWS_AS((void)band_histogram(r, 1, 8), DataError);
    CHECK_THROWS_AS((void)band_histogram(r, -1, 8), DataError);
    CHECK_THROWS_AS((void)band_histogram(r, 0, 0), DataError);
    CHECK_THROWS_AS((void)band_moments(r, 2), DataError);

    const Raster tiny = single_band(3, 1, {1.0, 2.0, 3.0});
    CHECK_THROWS_AS((void)band_moments(tiny, 0), DataError);
}
