#include "otcolor/image.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

namespace otc {

namespace {

constexpr float kFloMagic = 202021.25f;

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

std::uint8_t quantize(double v) {
    v = std::clamp(v, 0.0, 255.0);
    return static_cast<std::uint8_t>(std::floor(v + 0.5));  // round half up
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// ---------------------------------------------------------------- PPM (P6)

// Skips whitespace and '#' comments, then reads one unsigned decimal token.
bool read_ppm_token(std::istream& in, int& value) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) return false;
    long v = 0;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        if (v > 1'000'000'000L) return false;
        c = in.get();
    }
    if (c != EOF) in.unget();
    value = static_cast<int>(v);
    return true;
}

ImageF load_ppm(std::istream& in, const std::filesystem::path& path) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '6')
        throw FormatError("unsupported image format: " + path.string());

    int width = 0, height = 0, maxval = 0;
    if (!read_ppm_token(in, width) || !read_ppm_token(in, height) || !read_ppm_token(in, maxval))
        throw FormatError("corrupt PPM header: " + path.string());
    if (width < 1 || height < 1)
        throw FormatError("corrupt PPM header: " + path.string());
    if (maxval != 255)
        throw FormatError("unsupported PPM maxval (only 255): " + path.string());
    in.get();  // the single whitespace byte before the raster

    const std::size_t bytes = static_cast<std::size_t>(width) * height * 3;
    std::vector<std::uint8_t> raster(bytes);
    in.read(reinterpret_cast<char*>(raster.data()), static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes)
        throw FormatError("truncated PPM raster: " + path.string());

    ImageF img(width, height);
    for (std::size_t i = 0; i < bytes; ++i) img.data[i] = static_cast<double>(raster[i]);
    return img;
}

void save_ppm(const ImageF& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write image: " + path.string());
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<std::uint8_t> raster(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) raster[i] = quantize(img.data[i]);
    out.write(reinterpret_cast<const char*>(raster.data()),
              static_cast<std::streamsize>(raster.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

// ------------------------------------------------------------------- PNG

struct PngReadGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadGuard() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWriteGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriteGuard() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

ImageF load_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw IoError("cannot open image: " + path.string());

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
        throw FormatError("unsupported image format: " + path.string());

    PngReadGuard g;
    g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png) throw Error("libpng initialization failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info) throw Error("libpng initialization failed");

    // All C++ objects used below exist before setjmp; libpng longjmps back
    // here on any decode error.
    std::vector<std::uint8_t> raster;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(g.png)))
        throw FormatError("corrupt PNG stream: " + path.string());

    png_init_io(g.png, fp.get());
    png_set_sig_bytes(g.png, 8);
    png_read_info(g.png, g.info);

    const png_uint_32 width = png_get_image_width(g.png, g.info);
    const png_uint_32 height = png_get_image_height(g.png, g.info);
    const int color_type = png_get_color_type(g.png, g.info);
    const int bit_depth = png_get_bit_depth(g.png, g.info);

    // Coerce every variant to 8-bit RGB.
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(g.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(g.png);
    if (png_get_valid(g.png, g.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(g.png);
    if (bit_depth == 16) png_set_strip_16(g.png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(g.png);
    png_set_strip_alpha(g.png);
    png_read_update_info(g.png, g.info);

    if (png_get_rowbytes(g.png, g.info) != static_cast<std::size_t>(width) * 3)
        throw FormatError("unsupported PNG layout: " + path.string());

    raster.resize(static_cast<std::size_t>(width) * height * 3);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = raster.data() + static_cast<std::size_t>(y) * width * 3;
    png_read_image(g.png, rows.data());

    ImageF img(static_cast<int>(width), static_cast<int>(height));
    for (std::size_t i = 0; i < raster.size(); ++i) img.data[i] = static_cast<double>(raster[i]);
    return img;
}

void save_png(const ImageF& img, const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw IoError("cannot write image: " + path.string());

    PngWriteGuard g;
    g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png) throw Error("libpng initialization failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info) throw Error("libpng initialization failed");

    std::vector<std::uint8_t> raster(img.data.size());
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
    if (setjmp(png_jmpbuf(g.png)))
        throw IoError("PNG write failed: " + path.string());

    png_init_io(g.png, fp.get());
    png_set_IHDR(g.png, g.info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(g.png, g.info);

    for (std::size_t i = 0; i < img.data.size(); ++i) raster[i] = quantize(img.data[i]);
    for (int y = 0; y < img.height; ++y)
        rows[y] = raster.data() + static_cast<std::size_t>(y) * img.width * 3;
    png_write_image(g.png, rows.data());
    png_write_end(g.png, nullptr);
}

// ------------------------------------------------------------------- .flo

std::uint32_t read_u32_le(std::istream& in, bool& ok) {
    std::uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    ok = in.gcount() == 4;
    if (!ok) return 0;
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
    const std::uint8_t b[4] = {
        static_cast<std::uint8_t>(v & 0xFF),
        static_cast<std::uint8_t>((v >> 8) & 0xFF),
        static_cast<std::uint8_t>((v >> 16) & 0xFF),
        static_cast<std::uint8_t>((v >> 24) & 0xFF),
    };
    out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

ImageF load_image(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open image: " + path.string());
    char sig[2] = {0, 0};
    probe.read(sig, 2);
    if (probe.gcount() == 2 && sig[0] == 'P' && sig[1] == '6') {
        probe.seekg(0);
        return load_ppm(probe, path);
    }
    probe.close();
    return load_png(path);
}

void save_image(const ImageF& img, const std::filesystem::path& path) {
    if (img.width < 1 || img.height < 1 ||
        img.data.size() != static_cast<std::size_t>(img.width) * img.height * 3)
        throw DimensionError("invalid image buffer");
    const std::string ext = lower_extension(path);
    if (ext == ".png")
        save_png(img, path);
    else if (ext == ".ppm")
        save_ppm(img, path);
    else
        throw FormatError("unrecognized image extension: " + path.string());
}

FlowField load_flo(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open flow file: " + path.string());

    bool ok = false;
    const float magic = std::bit_cast<float>(read_u32_le(in, ok));
    if (!ok || magic != kFloMagic)
        throw FormatError("bad .flo magic number: " + path.string());
    const auto width = static_cast<std::int32_t>(read_u32_le(in, ok));
    if (!ok) throw FormatError("truncated .flo header: " + path.string());
    const auto height = static_cast<std::int32_t>(read_u32_le(in, ok));
    if (!ok) throw FormatError("truncated .flo header: " + path.string());
    if (width < 1 || height < 1)
        throw FormatError("nonpositive .flo dimensions: " + path.string());

    FlowField flow(width, height);
    for (std::size_t i = 0; i < flow.u.size(); ++i) {
        const float u = std::bit_cast<float>(read_u32_le(in, ok));
        if (!ok) throw FormatError("truncated .flo payload: " + path.string());
        const float v = std::bit_cast<float>(read_u32_le(in, ok));
        if (!ok) throw FormatError("truncated .flo payload: " + path.string());
        flow.u[i] = static_cast<double>(u);
        flow.v[i] = static_cast<double>(v);
    }
    return flow;
}

void write_flo(const FlowField& flow, const std::filesystem::path& path) {
    if (flow.width < 1 || flow.height < 1 ||
        flow.u.size() != static_cast<std::size_t>(flow.width) * flow.height ||
        flow.v.size() != flow.u.size())
        throw DimensionError("invalid flow field");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write flow file: " + path.string());
    write_u32_le(out, std::bit_cast<std::uint32_t>(kFloMagic));
    write_u32_le(out, static_cast<std::uint32_t>(flow.width));
    write_u32_le(out, static_cast<std::uint32_t>(flow.height));
    for (std::size_t i = 0; i < flow.u.size(); ++i) {
        write_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(flow.u[i])));
        write_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(flow.v[i])));
    }
    if (!out) throw IoError("write failed: " + path.string());
}

FlowField identity_flow(int width, int height) {
    if (width < 1 || height < 1) throw ConfigError("flow dimensions must be positive");
    return FlowField(width, height);
}

}  // namespace otc
