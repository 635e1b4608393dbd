#include "specclass/raster.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "specclass/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "raster payload I/O assumes a little-endian host");

namespace specclass {

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("corrupt JSON in " + path + ": " + e.what());
    }
    return j;
}

void save_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << body;
    if (!out) throw DataError("write failed: " + path);
}

} // namespace

void Raster::validate() const {
    if (width <= 0 || height <= 0 || bands <= 0)
        throw DataError("raster dimensions must be positive");
    if (!(pixel_size > 0.0)) throw DataError("pixel_size must be > 0");
    const std::size_t expected = cells() * static_cast<std::size_t>(bands);
    if (data.size() != expected) {
        std::ostringstream msg;
        msg << "raster holds " << data.size() << " samples, expected " << expected;
        throw DataError(msg.str());
    }
    if (!band_names.empty() && band_names.size() != static_cast<std::size_t>(bands))
        throw DataError("band_names count does not match band count");
    for (const double v : data)
        if (!std::isfinite(v)) throw DataError("raster contains a non-finite sample");
}

void LabelMask::validate() const {
    if (width <= 0 || height <= 0) throw DataError("label mask dimensions must be positive");
    if (labels.size() != static_cast<std::size_t>(width) * height)
        throw DataError("label grid size does not match dimensions");
    if (class_table.count(0) != 0)
        throw DataError("class id 0 is reserved for unlabeled and may not be in the class table");
    for (const std::uint32_t v : labels)
        if (v != 0 && class_table.count(v) == 0) {
            std::ostringstream msg;
            msg << "label " << v << " missing from class table";
            throw DataError(msg.str());
        }
}

bool operator==(const Raster& a, const Raster& b) {
    return a.width == b.width && a.height == b.height && a.bands == b.bands &&
           a.band_names == b.band_names && a.pixel_size == b.pixel_size && a.data == b.data;
}

bool operator==(const LabelMask& a, const LabelMask& b) {
    if (a.width != b.width || a.height != b.height || a.labels != b.labels) return false;
    if (a.class_table.size() != b.class_table.size()) return false;
    for (auto it_a = a.class_table.begin(), it_b = b.class_table.begin();
         it_a != a.class_table.end(); ++it_a, ++it_b) {
        if (it_a->first != it_b->first || it_a->second.name != it_b->second.name ||
            it_a->second.rgb != it_b->second.rgb)
            return false;
    }
    return true;
}

std::string strip_raster_suffix(const std::string& path) {
    for (const std::string suffix : {".hdr.json", ".classes.json", ".bsq"}) {
        if (path.size() > suffix.size() &&
            path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
            return path.substr(0, path.size() - suffix.size());
    }
    return path;
}

Raster read_raster(const std::string& path) {
    const std::string prefix = strip_raster_suffix(path);
    const std::string header_path = prefix + ".hdr.json";
    const std::string payload_path = prefix + ".bsq";

    const json header = load_json_file(header_path);
    Raster r;
    try {
        r.width = header.at("width").get<int>();
        r.height = header.at("height").get<int>();
        r.bands = header.at("bands").get<int>();
        if (header.contains("band_names"))
            r.band_names = header["band_names"].get<std::vector<std::string>>();
        r.pixel_size = header.value("pixel_size_m", 2.44);
    } catch (const json::exception& e) {
        throw DataError("corrupt header " + header_path + ": " + e.what());
    }
    if (r.width <= 0 || r.height <= 0 || r.bands <= 0)
        throw DataError("corrupt header " + header_path + ": nonpositive dimensions");

    std::ifstream in(payload_path, std::ios::binary);
    if (!in) throw DataError("cannot open payload " + payload_path);
    in.seekg(0, std::ios::end);
    const std::streamoff actual = in.tellg();
    in.seekg(0, std::ios::beg);

    const std::size_t samples = r.cells() * static_cast<std::size_t>(r.bands);
    const std::streamoff expected = static_cast<std::streamoff>(samples * sizeof(float));
    if (actual != expected) {
        std::ostringstream msg;
        msg << payload_path << ": payload is " << actual << " bytes, expected " << expected;
        throw DataError(msg.str());
    }

    std::vector<float> buffer(samples);
    in.read(reinterpret_cast<char*>(buffer.data()), expected);
    if (!in) throw DataError("short read on " + payload_path);

    r.data.resize(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        if (!std::isfinite(buffer[i]))
            throw DataError(payload_path + ": non-finite sample encountered");
        r.data[i] = static_cast<double>(buffer[i]);
    }
    return r;
}

void write_raster(const Raster& raster, const std::string& path) {
    raster.validate();
    const std::string prefix = strip_raster_suffix(path);

    json header;
    header["width"] = raster.width;
    header["height"] = raster.height;
    header["bands"] = raster.bands;
    header["band_names"] = raster.band_names;
    header["pixel_size_m"] = raster.pixel_size;
    save_text_file(prefix + ".hdr.json", header.dump(2) + "\n");

    std::vector<float> buffer(raster.data.size());
    for (std::size_t i = 0; i < raster.data.size(); ++i)
        buffer[i] = static_cast<float>(raster.data[i]);

    const std::string payload_path = prefix + ".bsq";
    std::ofstream out(payload_path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + payload_path + " for writing");
    out.write(reinterpret_cast<const char*>(buffer.data()),
              static_cast<std::streamsize>(buffer.size() * sizeof(float)));
    if (!out) throw DataError("write failed: " + payload_path);
}

LabelMask as_label_mask(const Raster& raster, const ClassTable& table) {
    raster.validate();
    if (raster.bands != 1) throw DataError("label masks must be stored as 1-band rasters");
    if (table.count(0) != 0)
        throw DataError("class id 0 is reserved for unlabeled and may not be in the class table");

    LabelMask mask;
    mask.width = raster.width;
    mask.height = raster.height;
    mask.class_table = table;
    mask.labels.resize(raster.cells());
    for (std::size_t i = 0; i < raster.cells(); ++i) {
        const double v = raster.data[i];
        if (v < 0.0 || std::nearbyint(v) != v) {
            std::ostringstream msg;
            msg << "sample " << v << " is not a nonnegative integer label";
            throw DataError(msg.str());
        }
        mask.labels[i] = static_cast<std::uint32_t>(v);
    }
    mask.validate();
    return mask;
}

Raster label_mask_to_raster(const LabelMask& mask, double pixel_size) {
    mask.validate();
    Raster r;
    r.width = mask.width;
    r.height = mask.height;
    r.bands = 1;
    r.band_names = {"labels"};
    r.pixel_size = pixel_size;
    r.data.resize(mask.labels.size());
    for (std::size_t i = 0; i < mask.labels.size(); ++i)
        r.data[i] = static_cast<double>(mask.labels[i]);
    return r;
}

ClassTable read_class_table(const std::string& path) {
    const json j = load_json_file(path);
    ClassTable table;
    try {
        for (const auto& [key, value] : j.items()) {
            const unsigned long id = std::stoul(key);
            ClassInfo info;
            info.name = value.at("name").get<std::string>();
            const auto rgb = value.at("rgb").get<std::vector<int>>();
            if (rgb.size() != 3) throw DataError(path + ": rgb must have 3 components");
            info.rgb = {rgb[0], rgb[1], rgb[2]};
            table[static_cast<std::uint32_t>(id)] = info;
        }
    } catch (const json::exception& e) {
        throw DataError("corrupt class table " + path + ": " + e.what());
    } catch (const std::invalid_argument&) {
        throw DataError("corrupt class table " + path + ": non-numeric class id");
    }
    if (table.count(0) != 0) throw DataError(path + ": class id 0 is reserved");
    return table;
}

void write_class_table(const ClassTable& table, const std::string& path) {
    json j = json::object();
    for (const auto& [id, info] : table) {
        json entry;
        entry["name"] = info.name;
        entry["rgb"] = info.rgb;
        j[std::to_string(id)] = entry;
    }
    save_text_file(path, j.dump(2) + "\n");
}

LabelMask read_label_mask(const std::string& path) {
    const std::string prefix = strip_raster_suffix(path);
    const Raster r = read_raster(prefix);
    const ClassTable table = read_class_table(prefix + ".classes.json");
    return as_label_mask(r, table);
}

void write_label_mask(const LabelMask& mask, const std::string& path, double pixel_size) {
    const std::string prefix = strip_raster_suffix(path);
    write_raster(label_mask_to_raster(mask, pixel_size), prefix);
    write_class_table(mask.class_table, prefix + ".classes.json");
}

} // namespace specclass
