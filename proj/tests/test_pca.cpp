#include <doctest.h>

#include <cmath>
#include <vector>

#include "specclass/errors.hpp"
#include "specclass/pca.hpp"
#include "specclass/rng.hpp"
#include "test_util.hpp"

using namespace specclass;

namespace {

Raster raster_from_bands(int width, int height,
                         const std::vector<std::vector<double>>& bands) {
    Raster r;
    r.width = width;
    r.height = height;
    r.bands = static_cast<int>(bands.size());
    for (std::size_t b = 0; b < bands.size(); ++b) {
        r.band_names.push_back("b" + std::to_string(b));
        r.data.insert(r.data.end(), bands[b].begin(), bands[b].end());
    }
    return r;
}

} // namespace

TEST_CASE("identical and negated bands hit correlation +-1") {
    const std::vector<double> base = {1, 2, 3, 4, 5, 6, 7, 9};
    std::vector<double> negated;
    for (double v : base)
        negated.push_back(-v);
    const Raster r = raster_from_bands(4, 2, {base, base, negated});
    const BandStatistics stats = band_statistics(r);
    CHECK(stats.correlation(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stats.correlation(0, 2) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(stats.correlation(1, 1) == 1.0);
}

TEST_CASE("covariance equals the brute-force double loop") {
    const Raster r = testutil::random_raster(4, 2, 3, 55, -5.0, 5.0);
    const BandStatistics stats = band_statistics(r);
    const std::size_t n = r.cells();
    for (int i = 0; i < 3; ++i) {
        double mean = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            mean += r.data[static_cast<std::size_t>(i) * n + p];
        mean /= static_cast<double>(n);
        CHECK(stats.means[static_cast<std::size_t>(i)] ==
              doctest::Approx(mean).epsilon(1e-13));
        for (int j = 0; j < 3; ++j) {
            double mj = 0.0;
            for (std::size_t p = 0; p < n; ++p)
                mj += r.data[static_cast<std::size_t>(j) * n + p];
            mj /= static_cast<double>(n);
            double cov = 0.0;
            for (std::size_t p = 0; p < n; ++p)
                cov += (r.data[static_cast<std::size_t>(i) * n + p] - mean) *
                       (r.data[static_cast<std::size_t>(j) * n + p] - mj);
            cov /= static_cast<double>(n);
            CHECK(stats.covariance(i, j) == doctest::Approx(cov).epsilon(1e-12));
            CHECK(stats.covariance(i, j) ==
                  doctest::Approx(stats.covariance(j, i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("mask restricts the statistics to labeled pixels") {
    // band values chosen so the masked subset has a different mean
    const Raster r = raster_from_bands(2, 2, {{10.0, 20.0, 30.0, 40.0}});
    LabelMask mask;
    mask.width = 2;
    mask.height = 2;
    mask.labels = {1, 0, 0, 1};
    const BandStatistics stats = band_statistics(r, &mask);
    CHECK(stats.means[0] == doctest::Approx(25.0).epsilon(1e-15)); // (10+40)/2
    CHECK(stats.covariance(0, 0) == doctest::Approx(225.0).epsilon(1e-13));
}

TEST_CASE("degenerate band handled without poisoning correlations") {
    const Raster r = raster_from_bands(4, 1, {{1, 2, 3, 4}, {7, 7, 7, 7}});
    const BandStatistics stats = band_statistics(r);
    CHECK(stats.degenerate[1] == 1);
    CHECK(stats.degenerate[0] == 0);
    CHECK(stats.correlation(0, 1) == 0.0);
    CHECK(stats.correlation(1, 1) == 1.0);
}

TEST_CASE("fewer than two pixels is an error") {
    const Raster r = raster_from_bands(1, 1, {{5.0}});
    CHECK_THROWS_AS((void)band_statistics(r), DataError);

    const Raster ok = raster_from_bands(2, 2, {{1, 2, 3, 4}});
    LabelMask mask;
    mask.width = 2;
    mask.height = 2;
    mask.labels = {0, 0, 0, 2};
    CHECK_THROWS_AS((void)band_statistics(ok, &mask), DataError);
}

TEST_CASE("diagonal covariance decomposes trivially") {
    BandStatistics stats;
    stats.covariance = Mat(2);
    stats.covariance(0, 0) = 4.0;
    stats.covariance(1, 1) = 1.0;
    const PcaResult pca = principal_components(stats);
    CHECK(pca.eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(pca.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(pca.eigenvectors(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pca.eigenvectors(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pca.variance_explained[0] == doctest::Approx(0.8).epsilon(1e-13));
    CHECK(pca.variance_explained[1] == doctest::Approx(0.2).epsilon(1e-13));
}

TEST_CASE("rank-1 covariance puts all variance on the first component") {
    BandStatistics stats;
    stats.covariance = Mat(2);
    stats.covariance(0, 0) = 1.0;
    stats.covariance(0, 1) = 1.0;
    stats.covariance(1, 0) = 1.0;
    stats.covariance(1, 1) = 1.0;
    const PcaResult pca = principal_components(stats);
    CHECK(pca.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(pca.eigenvalues[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    CHECK(pca.variance_explained[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(pca.variance_explained[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
}

TEST_CASE("random SPD matrices satisfy the eigen contracts") {
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng.bounded(2));
        Mat m(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = rng.normal(0.0, 1.0);
        BandStatistics stats;
        stats.covariance = Mat(n);
        double trace = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += m(k, i) * m(k, j);
                stats.covariance(i, j) = s + (i == j ? 0.1 : 0.0);
                if (i == j)
                    trace += stats.covariance(i, j);
            }
        const PcaResult pca = principal_components(stats);

        double sum = 0.0;
        for (double v : pca.eigenvalues)
            sum += v;
        CHECK(std::abs(sum - trace) < 1e-9);

        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double dot = 0.0;
                double recon = 0.0;
                for (int k = 0; k < n; ++k) {
                    dot += pca.eigenvectors(k, a) * pca.eigenvectors(k, b);
                    recon += pca.eigenvectors(a, k) * pca.eigenvalues[static_cast<std::size_t>(k)] *
                             pca.eigenvectors(b, k);
                }
                CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-10);
                CHECK(std::abs(recon - stats.covariance(a, b)) < 1e-10);
            }

        for (int k = 0; k < n; ++k) {
            double norm = 0.0;
            for (int i = 0; i < n; ++i) {
                double av = 0.0;
                for (int j = 0; j < n; ++j)
                    av += stats.covariance(i, j) * pca.eigenvectors(j, k);
                const double resid = av - pca.eigenvalues[static_cast<std::size_t>(k)] *
                                              pca.eigenvectors(i, k);
                norm += resid * resid;
            }
            CHECK(std::sqrt(norm) < 1e-9);
        }
    }
}

TEST_CASE("asymmetric covariance is rejected") {
    BandStatistics stats;
    stats.covariance = Mat(2);
    stats.covariance(0, 1) = 1.0;
    stats.covariance(1, 0) = 2.0;
    stats.covariance(0, 0) = stats.covariance(1, 1) = 5.0;
    CHECK_THROWS_AS((void)principal_components(stats), DataError);
}

TEST_CASE("select_bands applies the greedy drop rule") {
    const std::size_t n = 1000;
    Rng rng(8);
    std::vector<double> b0(n);
    std::vector<double> b1(n);
    std::vector<double> b2(n);
    std::vector<double> b3(n);
    for (std::size_t i = 0; i < n; ++i) {
        b0[i] = rng.normal(0.0, 1.0);
        b1[i] = rng.normal(0.0, 1.0);
        // bands 2 and 3 nearly duplicate each other, band 3 noisier
        b2[i] = rng.normal(0.0, 1.0);
        b3[i] = 1.5 * b2[i] + rng.normal(0.0, 0.05);
    }
    const Raster r = raster_from_bands(static_cast<int>(n), 1, {b0, b1, b2, b3});
    const BandStatistics stats = band_statistics(r);
    REQUIRE(std::abs(stats.correlation(2, 3)) > 0.95);

    const BandSelection sel = select_bands(stats, 0.95);
    REQUIRE(sel.drops.size() == 1);
    // var(band 2) < var(band 3), so band 2 goes
    CHECK(sel.drops[0].dropped == 2);
    CHECK(sel.drops[0].kept == 3);
    CHECK(sel.retained == std::vector<int>{0, 1, 3});
    CHECK(std::abs(sel.drops[0].correlation) > 0.95);
}

TEST_CASE("identical bands: the tie drops the higher index") {
    const std::vector<double> base = {1, 2, 3, 4};
    const Raster r = raster_from_bands(4, 1, {base, base});
    const BandStatistics stats = band_statistics(r);
    const BandSelection sel = select_bands(stats, 0.95);
    CHECK(sel.retained == std::vector<int>{0});
    REQUIRE(sel.drops.size() == 1);
    CHECK(sel.drops[0].dropped == 1);
}

TEST_CASE("no redundancy keeps everything") {
    const Raster r = testutil::random_raster(64, 64, 4, 99);
    const BandStatistics stats = band_statistics(r);
    const BandSelection sel = select_bands(stats, 0.95);
    CHECK(sel.retained.size() == 4);
    CHECK(sel.drops.empty());

    CHECK_THROWS_AS((void)select_bands(stats, 0.0), DataError);
    CHECK_THROWS_AS((void)select_bands(stats, 1.5), DataError);
}

TEST_CASE("retained set never contains a correlated pair") {
    Rng rng(404);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 500;
        std::vector<std::vector<double>> bands(5, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            bands[0][i] = rng.normal(0.0, 1.0);
            bands[1][i] = rng.normal(0.0, 1.0);
            bands[2][i] = bands[0][i] + rng.normal(0.0, 0.01);
            bands[3][i] = bands[1][i] - rng.normal(0.0, 0.01);
            bands[4][i] = rng.normal(0.0, 1.0);
        }
        const Raster r = raster_from_bands(static_cast<int>(n), 1, bands);
        const BandStatistics stats = band_statistics(r);
        const BandSelection sel = select_bands(stats, 0.9);
        for (std::size_t a = 0; a < sel.retained.size(); ++a)
            for (std::size_t b = a + 1; b < sel.retained.size(); ++b)
                CHECK(std::abs(stats.correlation(sel.retained[a], sel.retained[b])) < 0.9);
    }
}
