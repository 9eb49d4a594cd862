#pragma once

#include <span>
#include <vector>

namespace otc {

/// Monotone 1D transport map sampled at sorted abscissae. Queries
/// interpolate linearly inside the abscissa range and clamp to the end
/// ordinates outside it.
struct Transfer1D {
    std::vector<double> abscissae;  // sorted ascending
    std::vector<double> ordinates;  // nondecreasing

    double operator()(double x) const;
};

/// Sort-based 1D optimal transport. With equal sample counts the i-th
/// source order statistic is paired with the i-th target order statistic;
/// otherwise the i-th source order statistic maps to the target quantile
/// at level (i - 0.5)/n, interpolated between target order statistics at
/// levels (j - 0.5)/m. O(n log n + m log m).
Transfer1D solve_1d_quantile(std::span<const double> src, std::span<const double> tgt);

/// Cumulative-histogram 1D transport. Equal-width histograms are built over
/// the joint sample range; the map at each source bin centre c is
/// G^{-1}(F(c)) with both cumulative distributions linearly interpolated.
/// A constant target collapses to the constant map onto its single value.
Transfer1D solve_1d_histogram(std::span<const double> src, std::span<const double> tgt,
                              int bins);

/// Nadaraya-Watson smoothing of the correspondences (abscissae[i],
/// ordinates[i]) with a Gaussian kernel of bandwidth h, evaluated at each
/// query point. Kernel weights below exp(-50) are truncated; a query whose
/// every weight underflows falls back to the ordinate of the nearest
/// abscissa. Outputs always lie within [min ordinate, max ordinate].
std::vector<double> nw_smooth(std::span<const double> abscissae,
                              std::span<const double> ordinates, double bandwidth,
                              std::span<const double> queries);

}  // namespace otc
