#include "otcolor/patch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace otc {

void TransferConfig::validate() const {
    if (patch_size < 1 || patch_size % 2 == 0)
        throw ConfigError("patch size must be odd and >= 1");
    if (!(bandwidth > 0.0)) throw ConfigError("bandwidth must be > 0");
    if (iterations < 1) throw ConfigError("iterations must be >= 1");
    if (directions_per_iteration < 1) throw ConfigError("directions per iteration must be >= 1");
    if (histogram_bins < 2) throw ConfigError("histogram bins must be >= 2");
    if (solve_cap < 1) throw ConfigError("solve cap must be >= 1");
    if (!std::isfinite(stretch) || stretch < 0.0)
        throw ConfigError("stretch must be finite and >= 0");
}

PixelFeatureField augment_positions(const ImageF& img, const FlowField* flow, double stretch) {
    if (img.width < 1 || img.height < 1) throw DimensionError("empty image");
    if (flow && (flow->width != img.width || flow->height != img.height))
        throw DimensionError("flow dimensions do not match the image");

    // Normalization denominators: both grid endpoints reach [0,255];
    // a one-pixel extent maps to position 0.
    const double span_x = 255.0 / std::max(img.width - 1, 1);
    const double span_y = 255.0 / std::max(img.height - 1, 1);

    PixelFeatureField field(img.width, img.height, stretch);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::size_t p = static_cast<std::size_t>(y) * img.width + x;
            double fx = static_cast<double>(x);
            double fy = static_cast<double>(y);
            if (flow) {
                fx += flow->u[p];
                fy += flow->v[p];
            }
            double* out = field.data.data() + p * kFeatureDim;
            out[0] = img.data[p * 3 + 0];
            out[1] = img.data[p * 3 + 1];
            out[2] = img.data[p * 3 + 2];
            out[3] = stretch * (fx * span_x);
            out[4] = stretch * (fy * span_y);
        }
    }
    return field;
}

FeatureCloud extract_patches(const PixelFeatureField& field, int k) {
    if (k < 1) throw ConfigError("patch size must be >= 1");
    if (k > field.width || k > field.height)
        throw DimensionError("patch size exceeds the image extent");

    FeatureCloud cloud;
    cloud.geometry = {field.width, field.height, k, kFeatureDim, field.stretch};
    const int wx_count = field.width - k + 1;
    const int wy_count = field.height - k + 1;
    const int dim = cloud.dimension();
    cloud.vectors.resize(static_cast<std::size_t>(wx_count) * wy_count * dim);

    double* out = cloud.vectors.data();
    for (int wy = 0; wy < wy_count; ++wy) {
        for (int wx = 0; wx < wx_count; ++wx) {
            for (int dy = 0; dy < k; ++dy) {
                const double* row =
                    field.data.data() +
                    (static_cast<std::size_t>(wy + dy) * field.width + wx) * kFeatureDim;
                std::copy(row, row + static_cast<std::size_t>(k) * kFeatureDim, out);
                out += static_cast<std::size_t>(k) * kFeatureDim;
            }
        }
    }
    return cloud;
}

ImageF reconstruct_image(const FeatureCloud& cloud) {
    const CloudGeometry& g = cloud.geometry;
    if (g.k < 1 || g.width < g.k || g.height < g.k || g.dim < 3)
        throw DimensionError("cloud geometry inconsistent");
    if (cloud.vectors.size() != cloud.count() * cloud.dimension())
        throw DimensionError("cloud geometry inconsistent with vector count");

    ImageF accum(g.width, g.height, 0.0);
    std::vector<double> coverage(accum.pixel_count(), 0.0);

    const int wx_count = g.width - g.k + 1;
    const int wy_count = g.height - g.k + 1;
    const double* vec = cloud.vectors.data();
    for (int wy = 0; wy < wy_count; ++wy) {
        for (int wx = 0; wx < wx_count; ++wx) {
            for (int dy = 0; dy < g.k; ++dy) {
                for (int dx = 0; dx < g.k; ++dx) {
                    const std::size_t p = static_cast<std::size_t>(wy + dy) * g.width + (wx + dx);
                    accum.data[p * 3 + 0] += vec[0];
                    accum.data[p * 3 + 1] += vec[1];
                    accum.data[p * 3 + 2] += vec[2];
                    coverage[p] += 1.0;
                    vec += g.dim;
                }
            }
        }
    }

    for (std::size_t p = 0; p < coverage.size(); ++p) {
        for (int c = 0; c < 3; ++c) {
            const double mean = accum.data[p * 3 + c] / coverage[p];
            accum.data[p * 3 + c] = std::clamp(mean, 0.0, 255.0);
        }
    }
    return accum;
}

void dump_cloud_csv(const FeatureCloud& cloud, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write cloud dump: " + path.string());
    out << "# width=" << cloud.geometry.width << ",height=" << cloud.geometry.height
        << ",k=" << cloud.geometry.k << ",dim=" << cloud.geometry.dim
        << ",stretch=" << cloud.geometry.stretch << "\n";
    char buf[32];
    const int dim = cloud.dimension();
    for (std::size_t i = 0; i < cloud.count(); ++i) {
        const auto vec = cloud.vector(i);
        for (int c = 0; c < dim; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", vec[c]);
            out << buf << (c + 1 == dim ? '\n' : ',');
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace otc
