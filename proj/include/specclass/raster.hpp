#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace specclass {

// Multiband image: band-sequential, row-major within each band. Samples
// live as doubles in memory; the on-disk payload is little-endian
// float32, so write_raster quantizes (see raster.cpp).
struct Raster {
    int width = 0;
    int height = 0;
    int bands = 0;
    std::vector<std::string> band_names;
    double pixel_size = 2.44; // meters per pixel side; QuickBird multispectral default
    std::vector<double> data;

    std::size_t cells() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    std::size_t index(int band, int row, int col) const {
        return static_cast<std::size_t>(band) * cells() +
               static_cast<std::size_t>(row) * width + col;
    }
    double at(int band, int row, int col) const { return data[index(band, row, col)]; }
    double& at(int band, int row, int col) { return data[index(band, row, col)]; }

    // Throws DataError on any invariant violation (shape, finiteness,
    // pixel size).
    void validate() const;
};

struct ClassInfo {
    std::string name;
    std::array<int, 3> rgb{0, 0, 0};
};

// Ordered so serialization is deterministic. Id 0 is reserved for
// unlabeled/unclassified and must never appear as a key.
using ClassTable = std::map<std::uint32_t, ClassInfo>;

struct LabelMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> labels; // row-major
    ClassTable class_table;

    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * width + col;
    }
    std::uint32_t at(int row, int col) const { return labels[index(row, col)]; }
    std::uint32_t& at(int row, int col) { return labels[index(row, col)]; }

    void validate() const;
};

bool operator==(const Raster& a, const Raster& b);
bool operator==(const LabelMask& a, const LabelMask& b);

// Paths may be given either as the header file ("scene.hdr.json") or as
// the bare prefix ("scene"); companions are derived from the prefix:
//   <prefix>.hdr.json   UTF-8 JSON header
//   <prefix>.bsq        raw little-endian float32 payload
//   <prefix>.classes.json  class table (label masks only)
std::string strip_raster_suffix(const std::string& path);

Raster read_raster(const std::string& path);
void write_raster(const Raster& raster, const std::string& path);

// Reinterprets a 1-band raster of nonnegative integral samples as a
// label mask and validates class-table coverage.
LabelMask as_label_mask(const Raster& raster, const ClassTable& table);

// Inverse of as_label_mask: 1-band raster holding the label values.
Raster label_mask_to_raster(const LabelMask& mask, double pixel_size = 2.44);

ClassTable read_class_table(const std::string& path);
void write_class_table(const ClassTable& table, const std::string& path);

// Convenience bundles: raster payload plus the .classes.json companion.
LabelMask read_label_mask(const std::string& path);
void write_label_mask(const LabelMask& mask, const std::string& path, double pixel_size = 2.44);

} // namespace specclass
