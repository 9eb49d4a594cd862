#pragma once

#include <filesystem>

#include "otcolor/image.hpp"

namespace otc {

struct MetricReport {
    double psnr_db = 0.0;  // +infinity marks identical images
    double ssim = 0.0;
};

/// 10*log10(255^2 / MSE) with the MSE averaged over all pixels and
/// channels. Identical images return +infinity.
double psnr(const ImageF& a, const ImageF& b);

/// Single-scale SSIM on the BT.601 luminance plane (weights
/// 0.299/0.587/0.114), 11x11 Gaussian window sigma=1.5, C1=(0.01*255)^2,
/// C2=(0.03*255)^2, averaged over all fully interior window positions.
/// Requires min(width, height) >= 11.
double ssim(const ImageF& a, const ImageF& b);

MetricReport compare_images(const ImageF& a, const ImageF& b);

/// Writes a report as CSV (`psnr,ssim` header plus one row) or a JSON
/// object, chosen by extension (.csv / .json). An infinite PSNR is written
/// as the string "inf" in both formats.
void write_report(const MetricReport& report, const std::filesystem::path& path);

}  // namespace otc
