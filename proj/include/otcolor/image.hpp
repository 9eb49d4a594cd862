#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "otcolor/errors.hpp"

namespace otc {

/// RGB raster with floating-point samples in [0,255].
///
/// Layout is fixed: row-major, interleaved channels,
/// data[(y * width + x) * 3 + c] with c in {0:R, 1:G, 2:B}.
struct ImageF {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    ImageF() = default;
    ImageF(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {}

    double& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    double at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    bool same_size(const ImageF& other) const {
        return width == other.width && height == other.height;
    }
};

/// Dense per-pixel displacement field. u is the horizontal and v the
/// vertical displacement in pixels, row-major, one entry per pixel.
struct FlowField {
    int width = 0;
    int height = 0;
    std::vector<double> u;
    std::vector<double> v;

    FlowField() = default;
    FlowField(int w, int h)
        : width(w), height(h),
          u(static_cast<std::size_t>(w) * h, 0.0),
          v(static_cast<std::size_t>(w) * h, 0.0) {}

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
};

/// Decodes an 8-bit PNG or binary PPM (P6, maxval 255) file. The format is
/// detected from the file contents, not the extension.
ImageF load_image(const std::filesystem::path& path);

/// Clamps samples to [0,255], rounds half up to 8-bit and writes a PNG or
/// P6 PPM file depending on the extension (.png / .ppm).
void save_image(const ImageF& img, const std::filesystem::path& path);

/// Reads a Middlebury .flo file (little-endian: float magic 202021.25,
/// int32 width, int32 height, then width*height interleaved (u,v) float32
/// pairs in row-major order).
FlowField load_flo(const std::filesystem::path& path);

/// Writes a FlowField in the Middlebury .flo layout accepted by load_flo.
void write_flo(const FlowField& flow, const std::filesystem::path& path);

/// Zero displacement everywhere; positions then reduce to the grid coordinates.
FlowField identity_flow(int width, int height);

}  // namespace otc
