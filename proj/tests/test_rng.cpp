#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "specclass/rng.hpp"

using specclass::Rng;

// Raw words checked against an independent reference implementation of
// the generator, so any platform or refactoring drift is caught.
TEST_CASE("rng raw stream matches reference") {
    {
        Rng r(0);
        CHECK(r.next() == 11091344671253066420ULL);
        CHECK(r.next() == 13793997310169335082ULL);
        CHECK(r.next() == 1900383378846508768ULL);
        CHECK(r.next() == 7684712102626143532ULL);
        CHECK(r.next() == 13521403990117723737ULL);
    }
    {
        Rng r(42);
        CHECK(r.next() == 1546998764402558742ULL);
        CHECK(r.next() == 6990951692964543102ULL);
        CHECK(r.next() == 12544586762248559009ULL);
        CHECK(r.next() == 17057574109182124193ULL);
        CHECK(r.next() == 18295552978065317476ULL);
    }
    {
        Rng r(12345);
        CHECK(r.next() == 13720838825685603483ULL);
        CHECK(r.next() == 2398916695208396998ULL);
    }
}

TEST_CASE("rng determinism and seed sensitivity") {
    Rng a(7);
    Rng b(7);
    for (int i = 0; i < 100; ++i)
        CHECK(a.next() == b.next());

    Rng c(8);
    Rng d(7);
    bool differs = false;
    for (int i = 0; i < 10; ++i)
        if (c.next() != d.next())
            differs = true;
    CHECK(differs);
}

TEST_CASE("bounded stays in range and is roughly uniform") {
    Rng r(99);
    std::vector<int> counts(10, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const std::uint64_t v = r.bounded(10);
        REQUIRE(v < 10);
        counts[static_cast<std::size_t>(v)] += 1;
    }
    // Expected 10000 per bucket, sigma ~95; +-600 is beyond 6 sigma.
    for (int c : counts) {
        CHECK(c > 9400);
        CHECK(c < 10600);
    }
}

TEST_CASE("uniform ranges") {
    Rng r(3);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = r.uniform_open();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("normal consumes exactly two uniforms per draw") {
    Rng a(42);
    Rng b(42);
    (void)a.normal(0.0, 1.0);
    (void)b.next();
    (void)b.next();
    CHECK(a.next() == b.next());

    // First draw for seed 42, cross-checked against the reference
    // generator plus a hand evaluation of the Box-Muller formula.
    Rng c(42);
    CHECK(c.normal(0.0, 1.0) == doctest::Approx(-1.6132237513849157).epsilon(1e-15));
    CHECK(c.uniform() == doctest::Approx(0.6800434110281394).epsilon(1e-15));
}

TEST_CASE("normal moments and lognormal relation") {
    Rng r(1234);
    const int n = 200000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal(2.0, 3.0);
        sum += z;
        sum_sq += z * z;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(mean == doctest::Approx(2.0).epsilon(0.02));
    CHECK(std::sqrt(var) == doctest::Approx(3.0).epsilon(0.02));

    Rng a(5);
    Rng b(5);
    for (int i = 0; i < 100; ++i)
        CHECK(a.lognormal(0.5, 0.25) == std::exp(b.normal(0.5, 0.25)));
}
