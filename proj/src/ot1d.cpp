#include "otcolor/ot1d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "otcolor/errors.hpp"

namespace otc {

namespace {

void require_samples(std::span<const double> samples, const char* what) {
    if (samples.empty()) throw ConfigError(std::string("empty ") + what + " sample set");
    for (double v : samples)
        if (!std::isfinite(v)) throw ConfigError(std::string("non-finite ") + what + " sample");
}

// Target quantile at level p, linearly interpolated between order
// statistics placed at midpoint levels (j + 0.5)/m, clamped at the ends.
double quantile_at(const std::vector<double>& sorted, double p) {
    const std::size_t m = sorted.size();
    const double pos = p * static_cast<double>(m) - 0.5;
    if (pos <= 0.0) return sorted.front();
    if (pos >= static_cast<double>(m - 1)) return sorted.back();
    const auto j = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(j);
    return sorted[j] + frac * (sorted[j + 1] - sorted[j]);
}

}  // namespace

double Transfer1D::operator()(double x) const {
    if (abscissae.empty()) throw ConfigError("query on an empty transfer map");
    if (x <= abscissae.front()) return ordinates.front();
    if (x >= abscissae.back()) return ordinates.back();
    const auto it = std::upper_bound(abscissae.begin(), abscissae.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - abscissae.begin()) - 1;
    // abscissae[i] <= x < abscissae[i+1], so the segment has positive width.
    const double t = (x - abscissae[i]) / (abscissae[i + 1] - abscissae[i]);
    return ordinates[i] + t * (ordinates[i + 1] - ordinates[i]);
}

Transfer1D solve_1d_quantile(std::span<const double> src, std::span<const double> tgt) {
    require_samples(src, "source");
    require_samples(tgt, "target");

    Transfer1D map;
    map.abscissae.assign(src.begin(), src.end());
    std::sort(map.abscissae.begin(), map.abscissae.end());
    std::vector<double> sorted_tgt(tgt.begin(), tgt.end());
    std::sort(sorted_tgt.begin(), sorted_tgt.end());

    const std::size_t n = map.abscissae.size();
    if (n == sorted_tgt.size()) {
        map.ordinates = std::move(sorted_tgt);
        return map;
    }

    map.ordinates.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        map.ordinates[i] = quantile_at(sorted_tgt, p);
    }
    // Interpolating a sorted array at increasing levels is monotone; the
    // running max only irons out last-ulp rounding.
    for (std::size_t i = 1; i < n; ++i)
        map.ordinates[i] = std::max(map.ordinates[i], map.ordinates[i - 1]);
    return map;
}

Transfer1D solve_1d_histogram(std::span<const double> src, std::span<const double> tgt,
                              int bins) {
    if (bins < 2) throw ConfigError("histogram bins must be >= 2");
    require_samples(src, "source");
    require_samples(tgt, "target");

    const auto [tgt_min, tgt_max] = std::minmax_element(tgt.begin(), tgt.end());
    if (*tgt_min == *tgt_max) {
        // Degenerate target: everything maps onto its single value.
        Transfer1D map;
        const auto [src_min, src_max] = std::minmax_element(src.begin(), src.end());
        map.abscissae = {*src_min};
        map.ordinates = {*tgt_min};
        if (*src_max > *src_min) {
            map.abscissae.push_back(*src_max);
            map.ordinates.push_back(*tgt_min);
        }
        return map;
    }

    const auto [src_min, src_max] = std::minmax_element(src.begin(), src.end());
    const double lo = std::min(*src_min, *tgt_min);
    const double hi = std::max(*src_max, *tgt_max);
    const double width = (hi - lo) / bins;

    const auto ubins = static_cast<std::size_t>(bins);
    auto bin_of = [&](double x) {
        const auto b = static_cast<long>((x - lo) / width);
        return static_cast<std::size_t>(std::clamp(b, 0L, static_cast<long>(bins - 1)));
    };
    std::vector<double> src_hist(ubins, 0.0), tgt_hist(ubins, 0.0);
    for (double x : src) src_hist[bin_of(x)] += 1.0;
    for (double y : tgt) tgt_hist[bin_of(y)] += 1.0;

    std::vector<double> src_cum(ubins), tgt_cum(ubins);
    std::partial_sum(src_hist.begin(), src_hist.end(), src_cum.begin());
    std::partial_sum(tgt_hist.begin(), tgt_hist.end(), tgt_cum.begin());
    const double n = src_cum.back();
    const double m = tgt_cum.back();

    // Inverse target CDF in count space: q in [0,m] -> position.
    auto tgt_inverse = [&](double q) {
        if (q <= 0.0) {
            std::size_t j = 0;
            while (j + 1 < ubins && tgt_hist[j] == 0.0) ++j;
            return lo + width * static_cast<double>(j);
        }
        if (q >= m) {
            std::size_t j = ubins - 1;
            while (j > 0 && tgt_hist[j] == 0.0) --j;
            return lo + width * (static_cast<double>(j) + 1.0);
        }
        const auto it = std::lower_bound(tgt_cum.begin(), tgt_cum.end(), q);
        const auto j = static_cast<std::size_t>(it - tgt_cum.begin());
        const double prev = j == 0 ? 0.0 : tgt_cum[j - 1];
        const double frac = (q - prev) / tgt_hist[j];
        return lo + width * (static_cast<double>(j) + frac);
    };

    Transfer1D map;
    map.abscissae.resize(ubins);
    map.ordinates.resize(ubins);
    for (std::size_t i = 0; i < ubins; ++i) {
        map.abscissae[i] = lo + width * (static_cast<double>(i) + 0.5);
        const double f_counts = (i == 0 ? 0.0 : src_cum[i - 1]) + 0.5 * src_hist[i];
        map.ordinates[i] = tgt_inverse(f_counts / n * m);
    }
    for (std::size_t i = 1; i < ubins; ++i)
        map.ordinates[i] = std::max(map.ordinates[i], map.ordinates[i - 1]);
    return map;
}

std::vector<double> nw_smooth(std::span<const double> abscissae,
                              std::span<const double> ordinates, double bandwidth,
                              std::span<const double> queries) {
    if (!(bandwidth > 0.0)) throw ConfigError("bandwidth must be > 0");
    if (abscissae.empty()) throw ConfigError("empty correspondence set");
    if (abscissae.size() != ordinates.size())
        throw ConfigError("abscissae and ordinates differ in length");

    // Work on sorted pairs so each query only visits a contiguous window.
    std::vector<double> xs, ys;
    if (std::is_sorted(abscissae.begin(), abscissae.end())) {
        xs.assign(abscissae.begin(), abscissae.end());
        ys.assign(ordinates.begin(), ordinates.end());
    } else {
        std::vector<std::size_t> order(abscissae.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return abscissae[a] < abscissae[b]; });
        xs.resize(order.size());
        ys.resize(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            xs[i] = abscissae[order[i]];
            ys[i] = ordinates[order[i]];
        }
    }

    // Weights beyond 10 bandwidths are below exp(-50) ~ 2e-22 of the peak
    // and are truncated.
    const double radius = 10.0 * bandwidth;
    const double inv_two_h2 = 1.0 / (2.0 * bandwidth * bandwidth);

    auto nearest_ordinate = [&](double q) {
        const auto it = std::lower_bound(xs.begin(), xs.end(), q);
        if (it == xs.begin()) return ys.front();
        if (it == xs.end()) return ys.back();
        const auto i = static_cast<std::size_t>(it - xs.begin());
        return (q - xs[i - 1] <= xs[i] - q) ? ys[i - 1] : ys[i];
    };

    std::vector<double> out(queries.size());
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        const double q = queries[qi];
        const auto first = std::lower_bound(xs.begin(), xs.end(), q - radius);
        const auto last = std::upper_bound(first, xs.end(), q + radius);
        double num = 0.0, den = 0.0;
        for (auto it = first; it != last; ++it) {
            const double t = q - *it;
            const double w = std::exp(-t * t * inv_two_h2);
            num += ys[static_cast<std::size_t>(it - xs.begin())] * w;
            den += w;
        }
        out[qi] = den > 0.0 ? num / den : nearest_ordinate(q);
    }
    return out;
}

}  // namespace otc
