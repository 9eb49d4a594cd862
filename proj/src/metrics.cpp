#include "otcolor/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

namespace otc {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

void require_same_size(const ImageF& a, const ImageF& b) {
    if (!a.same_size(b)) throw DimensionError("images differ in size");
}

std::vector<double> luminance(const ImageF& img) {
    std::vector<double> luma(img.pixel_count());
    for (std::size_t p = 0; p < luma.size(); ++p)
        luma[p] = 0.299 * img.data[p * 3 + 0] + 0.587 * img.data[p * 3 + 1] +
                  0.114 * img.data[p * 3 + 2];
    return luma;
}

std::vector<double> gaussian_taps() {
    std::vector<double> taps(kWindow);
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
        const double t = i - (kWindow - 1) / 2.0;
        taps[i] = std::exp(-t * t / (2.0 * kSigma * kSigma));
        sum += taps[i];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

// Valid-region separable filtering: rows first, then columns.
std::vector<double> filter_valid(const std::vector<double>& plane, int width, int height,
                                 const std::vector<double>& taps) {
    const int out_w = width - kWindow + 1;
    const int out_h = height - kWindow + 1;
    std::vector<double> rows(static_cast<std::size_t>(out_w) * height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < out_w; ++x) {
            double s = 0.0;
            for (int i = 0; i < kWindow; ++i)
                s += taps[i] * plane[static_cast<std::size_t>(y) * width + x + i];
            rows[static_cast<std::size_t>(y) * out_w + x] = s;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(out_w) * out_h);
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            double s = 0.0;
            for (int i = 0; i < kWindow; ++i)
                s += taps[i] * rows[static_cast<std::size_t>(y + i) * out_w + x];
            out[static_cast<std::size_t>(y) * out_w + x] = s;
        }
    }
    return out;
}

std::string format_metric(double v) {
    if (std::isinf(v)) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

double psnr(const ImageF& a, const ImageF& b) {
    require_same_size(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        sum += d * d;
    }
    const double mse = sum / static_cast<double>(a.data.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const ImageF& a, const ImageF& b) {
    require_same_size(a, b);
    if (a.width < kWindow || a.height < kWindow)
        throw DimensionError("image smaller than the SSIM window");

    const std::vector<double> la = luminance(a);
    const std::vector<double> lb = luminance(b);
    const std::size_t pixels = la.size();
    std::vector<double> laa(pixels), lbb(pixels), lab(pixels);
    for (std::size_t p = 0; p < pixels; ++p) {
        laa[p] = la[p] * la[p];
        lbb[p] = lb[p] * lb[p];
        lab[p] = la[p] * lb[p];
    }

    const std::vector<double> taps = gaussian_taps();
    const std::vector<double> mu_a = filter_valid(la, a.width, a.height, taps);
    const std::vector<double> mu_b = filter_valid(lb, a.width, a.height, taps);
    const std::vector<double> e_aa = filter_valid(laa, a.width, a.height, taps);
    const std::vector<double> e_bb = filter_valid(lbb, a.width, a.height, taps);
    const std::vector<double> e_ab = filter_valid(lab, a.width, a.height, taps);

    double total = 0.0;
    for (std::size_t p = 0; p < mu_a.size(); ++p) {
        const double var_a = e_aa[p] - mu_a[p] * mu_a[p];
        const double var_b = e_bb[p] - mu_b[p] * mu_b[p];
        const double cov = e_ab[p] - mu_a[p] * mu_b[p];
        const double num = (2.0 * mu_a[p] * mu_b[p] + kC1) * (2.0 * cov + kC2);
        const double den = (mu_a[p] * mu_a[p] + mu_b[p] * mu_b[p] + kC1) * (var_a + var_b + kC2);
        total += num / den;
    }
    return total / static_cast<double>(mu_a.size());
}

MetricReport compare_images(const ImageF& a, const ImageF& b) {
    return {psnr(a, b), ssim(a, b)};
}

void write_report(const MetricReport& report, const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report: " + path.string());
    if (ext == ".csv") {
        out << "psnr,ssim\n"
            << format_metric(report.psnr_db) << "," << format_metric(report.ssim) << "\n";
    } else if (ext == ".json") {
        nlohmann::json j;
        if (std::isinf(report.psnr_db))
            j["psnr"] = "inf";
        else
            j["psnr"] = report.psnr_db;
        j["ssim"] = report.ssim;
        out << j.dump(2) << "\n";
    } else {
        throw FormatError("unrecognized report extension: " + path.string());
    }
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace otc
