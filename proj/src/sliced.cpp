#include "otcolor/sliced.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "otcolor/ot1d.hpp"

namespace otc {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void project_cloud(const FeatureCloud& cloud, std::span<const double> direction,
                   std::vector<double>& out) {
    const std::size_t n = cloud.count();
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = dot(cloud.vector(i), direction);
}

// Evenly spaced subsample used to fit the 1D maps when a cloud exceeds the
// solve cap; deterministic by construction.
std::vector<double> strided_subsample(const std::vector<double>& values, std::size_t cap) {
    if (values.size() <= cap) return values;
    std::vector<double> picked(cap);
    for (std::size_t i = 0; i < cap; ++i)
        picked[i] = values[i * values.size() / cap];
    return picked;
}

void require_clouds(const FeatureCloud& src, const FeatureCloud& tgt) {
    if (src.count() == 0 || tgt.count() == 0) throw ConfigError("empty feature cloud");
    if (src.dimension() != tgt.dimension())
        throw DimensionError("source and target clouds differ in dimension");
    if (src.vectors.size() != src.count() * src.dimension() ||
        tgt.vectors.size() != tgt.count() * tgt.dimension())
        throw DimensionError("cloud geometry inconsistent with vector count");
}

bool should_stop(const IterationTrace& trace) {
    // Relative decrease over a 5-iteration window below 1e-4.
    if (trace.size() < 6) return false;
    const double before = trace[trace.size() - 6].sliced_distance;
    const double now = trace.back().sliced_distance;
    return before - now < 1e-4 * std::max(before, std::numeric_limits<double>::min());
}

}  // namespace

DirectionBatch sample_directions(int dimension, int count, std::mt19937_64& rng) {
    if (dimension < 1) throw ConfigError("direction dimension must be >= 1");
    if (count < 1 || count > dimension)
        throw ConfigError("direction count must be in [1, dimension]");

    std::normal_distribution<double> gauss(0.0, 1.0);
    DirectionBatch batch;
    batch.dimension = dimension;
    batch.count = count;
    batch.vectors.resize(static_cast<std::size_t>(count) * dimension);

    const auto dim = static_cast<std::size_t>(dimension);
    for (int i = 0; i < count; ++i) {
        double* row = batch.vectors.data() + static_cast<std::size_t>(i) * dim;
        for (;;) {
            for (std::size_t c = 0; c < dim; ++c) row[c] = gauss(rng);
            // Modified Gram-Schmidt against the accepted rows.
            for (int j = 0; j < i; ++j) {
                const double* prev = batch.vectors.data() + static_cast<std::size_t>(j) * dim;
                double proj = 0.0;
                for (std::size_t c = 0; c < dim; ++c) proj += row[c] * prev[c];
                for (std::size_t c = 0; c < dim; ++c) row[c] -= proj * prev[c];
            }
            double norm2 = 0.0;
            for (std::size_t c = 0; c < dim; ++c) norm2 += row[c] * row[c];
            if (norm2 > 1e-16) {
                const double inv = 1.0 / std::sqrt(norm2);
                for (std::size_t c = 0; c < dim; ++c) row[c] *= inv;
                break;
            }
            // Residual vanished; redraw this row.
        }
    }
    return batch;
}

double sliced_step(FeatureCloud& src, const FeatureCloud& tgt, const DirectionBatch& batch,
                   const TransferConfig& cfg) {
    require_clouds(src, tgt);
    if (batch.dimension != src.dimension())
        throw DimensionError("direction batch dimension does not match the clouds");
    if (batch.count < 1) throw ConfigError("empty direction batch");

    const std::size_t n = src.count();
    const int dim = src.dimension();
    std::vector<double> proj_src, proj_tgt;
    std::vector<double> deltas(static_cast<std::size_t>(batch.count) * n, 0.0);

    double cost_sum = 0.0;
    for (int d = 0; d < batch.count; ++d) {
        const auto direction = batch.direction(d);
        project_cloud(src, direction, proj_src);
        project_cloud(tgt, direction, proj_tgt);

        const std::vector<double> solve_src = strided_subsample(proj_src, cfg.solve_cap);
        const std::vector<double> solve_tgt = strided_subsample(proj_tgt, cfg.solve_cap);

        Transfer1D map;
        double cost = 0.0;
        if (cfg.mode == TransportMode::Swd) {
            map = solve_1d_quantile(solve_src, solve_tgt);
            for (std::size_t i = 0; i < map.abscissae.size(); ++i) {
                const double move = map.ordinates[i] - map.abscissae[i];
                cost += move * move;
            }
            cost /= static_cast<double>(map.abscissae.size());
        } else {
            map = solve_1d_histogram(solve_src, solve_tgt, cfg.histogram_bins);
            for (double x : solve_src) {
                const double move = map(x) - x;
                cost += move * move;
            }
            cost /= static_cast<double>(solve_src.size());
        }
        cost_sum += cost;

        // Matched projections: nothing to transport along this direction.
        if (cost == 0.0) continue;

        double* delta_row = deltas.data() + static_cast<std::size_t>(d) * n;
        if (cfg.nw_enabled) {
            const std::vector<double> smoothed =
                nw_smooth(map.abscissae, map.ordinates, cfg.bandwidth, proj_src);
            for (std::size_t i = 0; i < n; ++i) delta_row[i] = smoothed[i] - proj_src[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) delta_row[i] = map(proj_src[i]) - proj_src[i];
        }
    }

    // Batch-averaged update, accumulated in a fixed direction order.
    const double scale = 1.0 / static_cast<double>(batch.count);
    for (std::size_t i = 0; i < n; ++i) {
        const auto vec = src.vector(i);
        for (int d = 0; d < batch.count; ++d) {
            const double step = deltas[static_cast<std::size_t>(d) * n + i] * scale;
            if (step == 0.0) continue;
            const auto direction = batch.direction(d);
            for (int c = 0; c < dim; ++c) vec[c] += step * direction[c];
        }
    }
    return cost_sum * scale;
}

TransportResult run_sliced_transport(const FeatureCloud& src, const FeatureCloud& tgt,
                                     const TransferConfig& cfg) {
    cfg.validate();
    require_clouds(src, tgt);

    TransportResult result{src, {}};
    std::mt19937_64 rng(cfg.seed);
    const int dim = src.dimension();
    const int dir_count = std::min(cfg.directions_per_iteration, dim);

    TransferConfig step_cfg = cfg;
    auto run_iteration = [&](int iteration, bool smooth) {
        step_cfg.nw_enabled = cfg.nw_enabled && smooth;
        const DirectionBatch batch = sample_directions(dim, dir_count, rng);
        const auto start = std::chrono::steady_clock::now();
        const double dist = sliced_step(result.cloud, tgt, batch, step_cfg);
        const std::chrono::duration<double, std::milli> elapsed =
            std::chrono::steady_clock::now() - start;
        result.trace.push_back({iteration, dist, elapsed.count()});
    };

    for (int t = 1; t <= cfg.iterations; ++t) {
        const bool last_budget = (t == cfg.iterations);
        run_iteration(t, !cfg.nw_final_only || last_budget);
        if (last_budget) break;
        if (should_stop(result.trace)) {
            // Converged early; with nw_final_only the reserved smoothing
            // pass still has to run once.
            if (cfg.nw_enabled && cfg.nw_final_only) run_iteration(t + 1, true);
            break;
        }
    }
    return result;
}

double sliced_distance_estimate(const FeatureCloud& a, const FeatureCloud& b, int directions,
                                std::mt19937_64& rng) {
    require_clouds(a, b);
    if (directions < 1) throw ConfigError("directions must be >= 1");

    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto dim = static_cast<std::size_t>(a.dimension());
    std::vector<double> direction(dim), proj_a, proj_b;
    double total = 0.0;
    for (int d = 0; d < directions; ++d) {
        double norm2 = 0.0;
        do {
            for (std::size_t c = 0; c < dim; ++c) direction[c] = gauss(rng);
            norm2 = dot(direction, direction);
        } while (norm2 <= 1e-16);
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t c = 0; c < dim; ++c) direction[c] *= inv;

        project_cloud(a, direction, proj_a);
        project_cloud(b, direction, proj_b);
        const Transfer1D map = solve_1d_quantile(proj_a, proj_b);
        double cost = 0.0;
        for (std::size_t i = 0; i < map.abscissae.size(); ++i) {
            const double move = map.ordinates[i] - map.abscissae[i];
            cost += move * move;
        }
        total += cost / static_cast<double>(map.abscissae.size());
    }
    return total / static_cast<double>(directions);
}

void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trace: " + path.string());
    out << "iteration,sliced_distance,millis\n";
    char buf[80];
    for (const IterationEntry& e : trace) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.3f\n", e.iteration, e.sliced_distance,
                      e.millis);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace otc
