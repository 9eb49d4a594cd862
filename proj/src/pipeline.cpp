#include "otcolor/pipeline.hpp"

#include <algorithm>

namespace otc {

TransferResult transfer_images(const ImageF& source, const ImageF& target,
                               const FlowField* flow, const TransferConfig& cfg) {
    cfg.validate();
    if (cfg.patch_size > std::min(source.width, source.height) ||
        cfg.patch_size > std::min(target.width, target.height))
        throw DimensionError("patch size exceeds an image extent");

    // The source keeps grid positions; the target's positions follow the flow.
    const PixelFeatureField src_field = augment_positions(source, nullptr, cfg.stretch);
    const PixelFeatureField tgt_field = augment_positions(target, flow, cfg.stretch);
    const FeatureCloud src_cloud = extract_patches(src_field, cfg.patch_size);
    const FeatureCloud tgt_cloud = extract_patches(tgt_field, cfg.patch_size);

    TransportResult transported = run_sliced_transport(src_cloud, tgt_cloud, cfg);
    return {reconstruct_image(transported.cloud), std::move(transported.trace)};
}

ImageF mosaic_interleave(const ImageF& a, const ImageF& b, int strip_width) {
    if (!a.same_size(b)) throw DimensionError("mosaic inputs differ in size");
    if (strip_width < 1) throw ConfigError("strip width must be >= 1");

    ImageF out(a.width, a.height);
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            const ImageF& pick = ((x / strip_width) % 2 == 0) ? a : b;
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = pick.at(x, y, c);
        }
    }
    return out;
}

}  // namespace otc
