#pragma once

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "otcolor/patch.hpp"

namespace testutil {

// Unique scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static std::mt19937_64 rng(std::random_device{}());
        path = std::filesystem::temp_directory_path() /
               ("otcolor_" + tag + "_" + std::to_string(rng()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::filesystem::path file(const std::string& name) const { return path / name; }
};

// Synthetic cloud of n points in R^dim (geometry: one-row field, k=1).
inline otc::FeatureCloud make_cloud(const std::vector<double>& vectors, int dim) {
    otc::FeatureCloud cloud;
    const int n = static_cast<int>(vectors.size()) / dim;
    cloud.geometry = {n, 1, 1, dim, 0.0};
    cloud.vectors = vectors;
    return cloud;
}

inline otc::ImageF random_image(int w, int h, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> byte(0, 255);
    otc::ImageF img(w, h);
    for (double& v : img.data) v = static_cast<double>(byte(rng));
    return img;
}

inline std::string cli_path() {
    const char* env = std::getenv("OTCOLOR_CLI");
    return env ? env : "";
}

}  // namespace testutil
