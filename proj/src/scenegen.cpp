#include "specclass/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "specclass/errors.hpp"
#include "specclass/rng.hpp"

namespace specclass {

namespace {

using nlohmann::json;

BandDistribution parse_distribution(const json& node) {
    BandDistribution dist;
    const std::string kind = node.at("distribution").get<std::string>();
    if (kind == "lognormal") {
        dist.kind = BandDistribution::Kind::Lognormal;
        dist.location = node.at("mu_log").get<double>();
        dist.scale = node.at("sigma_log").get<double>();
    } else if (kind == "normal") {
        dist.kind = BandDistribution::Kind::Normal;
        dist.location = node.at("mu").get<double>();
        dist.scale = node.at("sigma").get<double>();
    } else {
        throw DataError("unknown distribution '" + kind + "'");
    }
    return dist;
}

Region parse_region(const json& node) {
    Region region;
    const std::string kind = node.at("type").get<std::string>();
    if (kind == "rect") {
        region.kind = Region::Kind::Rect;
        region.x = node.at("x").get<int>();
        region.y = node.at("y").get<int>();
        region.width = node.at("width").get<int>();
        region.height = node.at("height").get<int>();
    } else if (kind == "blob") {
        region.kind = Region::Kind::Blob;
        region.seed_x = node.at("x").get<int>();
        region.seed_y = node.at("y").get<int>();
    } else {
        throw DataError("unknown region type '" + kind + "'");
    }
    return region;
}

const std::array<std::array<int, 3>, 8> kPalette = {{
    {31, 119, 180},
    {255, 127, 14},
    {44, 160, 44},
    {214, 39, 40},
    {148, 103, 189},
    {140, 86, 75},
    {227, 119, 194},
    {127, 127, 127},
}};

} // namespace

void SceneSpec::validate() const {
    if (width <= 0 || height <= 0 || bands <= 0)
        throw DataError("scene dimensions and band count must be positive");
    if (!band_names.empty() && static_cast<int>(band_names.size()) != bands)
        throw DataError("band_names count does not match band count");
    if (!(noise_floor >= 0.0) || !std::isfinite(noise_floor))
        throw DataError("noise_floor must be finite and non-negative");
    if (classes.empty())
        throw DataError("scene needs at least one class");

    std::set<std::uint32_t> seen;
    for (const SceneClassSpec& cls : classes) {
        if (cls.class_id == 0)
            throw DataError("class id 0 is reserved for unclassified");
        if (!seen.insert(cls.class_id).second)
            throw DataError("duplicate class id " + std::to_string(cls.class_id));
        if (static_cast<int>(cls.bands.size()) != bands) {
            std::ostringstream msg;
            msg << "class " << cls.class_id << " defines " << cls.bands.size()
                << " band distributions, expected " << bands;
            throw DataError(msg.str());
        }
        for (const BandDistribution& dist : cls.bands)
            if (!(dist.scale > 0.0) || !std::isfinite(dist.scale) ||
                !std::isfinite(dist.location))
                throw DataError("class " + std::to_string(cls.class_id) +
                                " has an invalid distribution parameter");
        if (cls.region.kind == Region::Kind::Rect) {
            if (cls.region.width <= 0 || cls.region.height <= 0 ||
                cls.region.x < 0 || cls.region.y < 0 ||
                cls.region.x + cls.region.width > width ||
                cls.region.y + cls.region.height > height)
                throw DataError("class " + std::to_string(cls.class_id) +
                                " rect falls outside the image");
        } else {
            if (cls.region.seed_x < 0 || cls.region.seed_x >= width ||
                cls.region.seed_y < 0 || cls.region.seed_y >= height)
                throw DataError("class " + std::to_string(cls.class_id) +
                                " blob seed falls outside the image");
        }
    }
}

SceneSpec read_scene_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError("invalid scene spec '" + path + "': " + e.what());
    }

    SceneSpec spec;
    try {
        spec.width = doc.at("width").get<int>();
        spec.height = doc.at("height").get<int>();
        spec.bands = doc.at("bands").get<int>();
        if (doc.contains("band_names"))
            spec.band_names = doc["band_names"].get<std::vector<std::string>>();
        if (doc.contains("pixel_size_m"))
            spec.pixel_size_m = doc["pixel_size_m"].get<double>();
        if (doc.contains("noise_floor"))
            spec.noise_floor = doc["noise_floor"].get<double>();
        spec.seed = doc.at("seed").get<std::uint64_t>();
        std::size_t slot = 0;
        for (const json& node : doc.at("classes")) {
            SceneClassSpec cls;
            cls.class_id = node.at("class_id").get<std::uint32_t>();
            cls.name = node.contains("name")
                           ? node["name"].get<std::string>()
                           : "class_" + std::to_string(cls.class_id);
            if (node.contains("rgb")) {
                auto rgb = node["rgb"].get<std::vector<int>>();
                if (rgb.size() != 3)
                    throw DataError("rgb must hold three components");
                cls.rgb = {rgb[0], rgb[1], rgb[2]};
            } else {
                cls.rgb = kPalette[slot % kPalette.size()];
            }
            ++slot;
            cls.region = parse_region(node.at("region"));
            for (const json& band : node.at("bands"))
                cls.bands.push_back(parse_distribution(band));
            spec.classes.push_back(std::move(cls));
        }
    } catch (const json::exception& e) {
        throw DataError("invalid scene spec '" + path + "': " + e.what());
    }
    spec.validate();
    return spec;
}

LabelMask scene_regions(const SceneSpec& spec) {
    spec.validate();

    LabelMask mask;
    mask.width = spec.width;
    mask.height = spec.height;
    mask.labels.assign(static_cast<std::size_t>(spec.width) * spec.height, 0);

    // Blob classes sorted ascending so distance ties go to the smaller id.
    std::vector<const SceneClassSpec*> blobs;
    for (const SceneClassSpec& cls : spec.classes)
        if (cls.region.kind == Region::Kind::Blob)
            blobs.push_back(&cls);
    std::sort(blobs.begin(), blobs.end(),
              [](const SceneClassSpec* a, const SceneClassSpec* b) {
                  return a->class_id < b->class_id;
              });

    if (!blobs.empty()) {
        for (int row = 0; row < spec.height; ++row)
            for (int col = 0; col < spec.width; ++col) {
                std::int64_t best = -1;
                std::uint32_t best_id = 0;
                for (const SceneClassSpec* cls : blobs) {
                    const std::int64_t dx = col - cls->region.seed_x;
                    const std::int64_t dy = row - cls->region.seed_y;
                    const std::int64_t d2 = dx * dx + dy * dy;
                    if (best < 0 || d2 < best) {
                        best = d2;
                        best_id = cls->class_id;
                    }
                }
                mask.labels[static_cast<std::size_t>(row) * spec.width + col] = best_id;
            }
    }

    for (const SceneClassSpec& cls : spec.classes) {
        if (cls.region.kind != Region::Kind::Rect)
            continue;
        for (int row = cls.region.y; row < cls.region.y + cls.region.height; ++row)
            for (int col = cls.region.x; col < cls.region.x + cls.region.width; ++col)
                mask.labels[static_cast<std::size_t>(row) * spec.width + col] =
                    cls.class_id;
    }

    for (std::uint32_t id : mask.labels)
        if (id == 0)
            throw DataError("class regions do not cover the image");

    for (const SceneClassSpec& cls : spec.classes)
        mask.class_table[cls.class_id] = ClassInfo{cls.name, cls.rgb};
    return mask;
}

std::pair<Raster, LabelMask> generate_scene(const SceneSpec& spec) {
    LabelMask mask = scene_regions(spec);

    std::map<std::uint32_t, const SceneClassSpec*> by_id;
    for (const SceneClassSpec& cls : spec.classes)
        by_id[cls.class_id] = &cls;

    Raster raster;
    raster.width = spec.width;
    raster.height = spec.height;
    raster.bands = spec.bands;
    raster.pixel_size = spec.pixel_size_m;
    if (spec.band_names.empty()) {
        for (int b = 0; b < spec.bands; ++b)
            raster.band_names.push_back("band_" + std::to_string(b));
    } else {
        raster.band_names = spec.band_names;
    }
    raster.data.resize(raster.cells() * static_cast<std::size_t>(raster.bands));

    // One PRNG stream, band-major then row-major, so the draw sequence is
    // pinned regardless of threading.
    Rng rng(spec.seed);
    const std::size_t cells = mask.labels.size();
    for (int b = 0; b < spec.bands; ++b) {
        double* out = raster.data.data() + static_cast<std::size_t>(b) * cells;
        for (std::size_t i = 0; i < cells; ++i) {
            const SceneClassSpec* cls = by_id[mask.labels[i]];
            const BandDistribution& dist = cls->bands[static_cast<std::size_t>(b)];
            double value = dist.kind == BandDistribution::Kind::Lognormal
                               ? rng.lognormal(dist.location, dist.scale)
                               : rng.normal(dist.location, dist.scale);
            out[i] = static_cast<double>(
                static_cast<float>(spec.noise_floor + value));
        }
    }
    return {std::move(raster), std::move(mask)};
}

} // namespace specclass
