#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specclass/raster.hpp"

namespace specclass {

struct BandDistribution {
    enum class Kind { Lognormal, Normal };
    Kind kind = Kind::Lognormal;
    double location = 0.0; // mu_log for lognormal, mu for normal
    double scale = 1.0;    // sigma_log / sigma, must be > 0
};

struct Region {
    enum class Kind { Rect, Blob };
    Kind kind = Kind::Blob;
    // rect
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
    // blob: Voronoi seed point
    int seed_x = 0;
    int seed_y = 0;
};

struct SceneClassSpec {
    std::uint32_t class_id = 0;
    std::string name;
    std::array<int, 3> rgb = {0, 0, 0};
    Region region;
    std::vector<BandDistribution> bands;
};

struct SceneSpec {
    int width = 0;
    int height = 0;
    int bands = 0;
    std::vector<std::string> band_names;
    double pixel_size_m = 2.44;
    double noise_floor = 0.0;
    std::uint64_t seed = 0;
    std::vector<SceneClassSpec> classes;

    void validate() const;
};

SceneSpec read_scene_spec(const std::string& path);

// Region geometry alone: blob classes partition the image by nearest seed
// (ties to the smaller class id), then rect classes paint over in list
// order. Every pixel must end up with a class.
LabelMask scene_regions(const SceneSpec& spec);

// Full scene: truth mask plus a raster drawn band-major, row-major from a
// single PRNG stream, so the output is identical across platforms and
// thread settings. Values are offset by noise_floor and quantized to
// float32, matching what a round trip through disk would hold.
std::pair<Raster, LabelMask> generate_scene(const SceneSpec& spec);

} // namespace specclass
