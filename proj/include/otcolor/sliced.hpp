#pragma once

#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "otcolor/patch.hpp"

namespace otc {

/// A batch of unit-norm projection directions in R^dimension, mutually
/// orthogonal when count <= dimension. Row-major: one direction per row.
struct DirectionBatch {
    int dimension = 0;
    int count = 0;
    std::vector<double> vectors;

    std::span<const double> direction(int i) const {
        return {vectors.data() + static_cast<std::size_t>(i) * dimension,
                static_cast<std::size_t>(dimension)};
    }
};

struct IterationEntry {
    int iteration = 0;
    double sliced_distance = 0.0;  // batch mean of the 1D squared transport costs
    double millis = 0.0;
};
using IterationTrace = std::vector<IterationEntry>;

/// Draws count independent standard-normal D-vectors and orthonormalizes
/// them. Deterministic given the generator state. Requires 1 <= count <= D.
DirectionBatch sample_directions(int dimension, int count, std::mt19937_64& rng);

/// One iteration of the projection scheme: for every direction in the
/// batch, project both clouds, solve 1D transport in cfg.mode (smoothed
/// with bandwidth cfg.bandwidth when cfg.nw_enabled), and accumulate the
/// per-sample displacements. src is advanced by the batch-averaged
/// displacement in place. Directions whose 1D cost is exactly zero
/// contribute nothing: the projections already match. Returns the batch
/// mean of the per-direction squared transport costs.
double sliced_step(FeatureCloud& src, const FeatureCloud& tgt, const DirectionBatch& batch,
                   const TransferConfig& cfg);

struct TransportResult {
    FeatureCloud cloud;
    IterationTrace trace;
};

/// Runs up to cfg.iterations sliced steps with fresh direction batches of
/// size min(cfg.directions_per_iteration, D), stopping early once the
/// relative decrease of the distance estimate over a 5-iteration window
/// falls below 1e-4. With cfg.nw_final_only the last executed iteration is
/// the only smoothed one. The returned cloud keeps src's geometry.
TransportResult run_sliced_transport(const FeatureCloud& src, const FeatureCloud& tgt,
                                     const TransferConfig& cfg);

/// Monte-Carlo sliced distance between two clouds: mean 1D quantile-matching
/// cost over `directions` fresh independent unit directions.
double sliced_distance_estimate(const FeatureCloud& a, const FeatureCloud& b, int directions,
                                std::mt19937_64& rng);

/// CSV export, one `iteration,sliced_distance,millis` row per entry.
void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path);

}  // namespace otc
