#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "otcolor/image.hpp"

namespace otc {

/// Components per pixel feature: r, g, b, px, py.
inline constexpr int kFeatureDim = 5;

/// Per-pixel 5-vectors (r,g,b,px,py) after position normalization and
/// spatial stretching. Layout: data[(y * width + x) * kFeatureDim + c].
struct PixelFeatureField {
    int width = 0;
    int height = 0;
    double stretch = 1.0;
    std::vector<double> data;

    PixelFeatureField() = default;
    PixelFeatureField(int w, int h, double s)
        : width(w), height(h), stretch(s),
          data(static_cast<std::size_t>(w) * h * kFeatureDim, 0.0) {}

    double& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * kFeatureDim + c];
    }
    double at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * kFeatureDim + c];
    }
};

/// Extraction parameters retained with a cloud so it can be inverted.
struct CloudGeometry {
    int width = 0;
    int height = 0;
    int k = 0;
    int dim = kFeatureDim;
    double stretch = 1.0;
};

/// n patch vectors of dimension dim*k*k, one per stride-1 sliding window.
///
/// Flattening order is fixed: windows are enumerated row-major by their
/// top-left corner; inside a window, pixels are visited row-major and each
/// pixel contributes its dim feature components contiguously. So entry
/// ((dy*k + dx)*dim + c) of patch (wy*(width-k+1) + wx) is component c of
/// pixel (wx+dx, wy+dy).
struct FeatureCloud {
    CloudGeometry geometry;
    std::vector<double> vectors;  // count() x dimension(), row-major

    std::size_t count() const {
        if (geometry.width < geometry.k || geometry.height < geometry.k) return 0;
        return static_cast<std::size_t>(geometry.height - geometry.k + 1) *
               (geometry.width - geometry.k + 1);
    }
    int dimension() const { return geometry.dim * geometry.k * geometry.k; }

    std::span<double> vector(std::size_t i) {
        return {vectors.data() + i * dimension(), static_cast<std::size_t>(dimension())};
    }
    std::span<const double> vector(std::size_t i) const {
        return {vectors.data() + i * dimension(), static_cast<std::size_t>(dimension())};
    }
};

enum class TransportMode { Swd, Idt };

/// All pipeline tunables. Defaults: 5x5 patches, spatial stretch 10,
/// smoothing bandwidth 10, sort-based transport.
struct TransferConfig {
    int patch_size = 5;              // k; odd, >= 1
    double stretch = 10.0;           // spatial stretch factor w
    double bandwidth = 10.0;         // Nadaraya-Watson bandwidth h
    TransportMode mode = TransportMode::Swd;
    int iterations = 30;
    int directions_per_iteration = 8;
    int histogram_bins = 256;        // Idt mode only
    std::uint64_t seed = 1;
    bool nw_enabled = true;
    bool nw_final_only = false;      // smooth only the last iteration
    std::size_t solve_cap = 500000;  // max samples used to fit each 1D map

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

/// Builds the per-pixel feature field of an image: colours are copied
/// unchanged; the position of pixel (x,y) is (x,y) plus the flow vector
/// when a flow is given, normalized so the grid range [0, extent-1] maps
/// to [0,255] per axis, then multiplied by `stretch`. Flow-displaced
/// positions are not clamped, so out-of-frame correspondences land
/// outside [0, 255*stretch]. Pass flow = nullptr for grid positions.
PixelFeatureField augment_positions(const ImageF& img, const FlowField* flow, double stretch);

/// Stride-1 sliding-window extraction of overlapping k x k patches,
/// starting from the upper-left corner. Windows stay inside the image.
FeatureCloud extract_patches(const PixelFeatureField& field, int k);

/// Inverts a patch cloud to an image: each pixel's colour is the unweighted
/// mean of the colour components of every patch covering it, clamped to
/// [0,255]. Position components are ignored.
ImageF reconstruct_image(const FeatureCloud& cloud);

/// Debug dump: geometry in a header comment, then one vector per line.
void dump_cloud_csv(const FeatureCloud& cloud, const std::filesystem::path& path);

}  // namespace otc
