#pragma once

#include "otcolor/image.hpp"
#include "otcolor/patch.hpp"
#include "otcolor/sliced.hpp"

namespace otc {

struct TransferResult {
    ImageF image;
    IterationTrace trace;
};

/// End-to-end recolouring: the source keeps grid positions, the target's
/// positions are displaced by `flow` when given (flow dimensions must match
/// the target), both are encoded as overlapping patch clouds, the source
/// cloud is transported onto the target cloud and reconstructed.
TransferResult transfer_images(const ImageF& source, const ImageF& target,
                               const FlowField* flow, const TransferConfig& cfg);

/// Column mosaic: columns alternate between a and b in blocks of
/// strip_width pixels, starting with a.
ImageF mosaic_interleave(const ImageF& a, const ImageF& b, int strip_width);

}  // namespace otc
