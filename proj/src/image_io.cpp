// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include "nightforge/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace nightforge::io {
namespace {

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return ext;
}

std::uint32_t byteswap32(std::uint32_t v) {
    return (v >> 24) | ((v >> 8) & 0xFF00u) | ((v << 8) & 0xFF0000u) | (v << 24);
}

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct DecodedPng {
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int bit_depth = 0;
    std::vector<png_byte> bytes;  // RGB, 1 or 2 bytes per sample, big-endian
};

// Only trivially destructible locals live between setjmp and png_destroy so
// that a longjmp out of libpng skips nothing that needs unwinding.
bool decode_png(std::FILE* fp, DecodedPng& out, const char** message) {
    png_byte sig[8];
    if (std::fread(sig, 1, 8, fp) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        *message = "not a PNG file";
        return false;
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (png == nullptr || info == nullptr) {
        png_destroy_read_struct(&png, &info, nullptr);
        *message = "libpng allocation failed";
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        *message = "corrupt PNG data";
        return false;
    }
    png_init_io(png, fp);
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(png);
    }
    png_read_update_info(png, info);

    out.width = png_get_image_width(png, info);
    out.height = png_get_image_height(png, info);
    out.bit_depth = png_get_bit_depth(png, info);
    const png_size_t rowbytes = png_get_rowbytes(png, info);
    if (png_get_channels(png, info) != 3 || (out.bit_depth != 8 && out.bit_depth != 16)) {
        png_destroy_read_struct(&png, &info, nullptr);
        *message = "unsupported PNG layout";
        return false;
    }
    out.bytes.resize(rowbytes * out.height);
    for (png_uint_32 y = 0; y < out.height; ++y) {
        png_read_row(png, out.bytes.data() + y * rowbytes, nullptr);
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

bool encode_png(std::FILE* fp, png_uint_32 width, png_uint_32 height, int bit_depth,
                int color_type, const png_byte* rows, png_size_t rowbytes) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (png == nullptr || info == nullptr) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_init_io(png, fp);
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (png_uint_32 y = 0; y < height; ++y) {
        png_write_row(png, rows + y * rowbytes);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

void write_png(const std::filesystem::path& path, const ImagePlane& plane, int bit_depth) {
    const int c = plane.channels();
    if (c != 1 && c != 3) {
        throw Error(ErrorKind::WrongChannelCount, "PNG output needs 1 or 3 channels");
    }
    if (plane.empty()) throw Error(ErrorKind::InvalidDims, "cannot write empty PNG");
    const std::size_t bytes_per_sample = bit_depth == 16 ? 2 : 1;
    const double max_code = bit_depth == 16 ? 65535.0 : 255.0;
    const png_size_t rowbytes = static_cast<png_size_t>(plane.width()) * c * bytes_per_sample;
    std::vector<png_byte> rows(rowbytes * plane.height());
    auto values = plane.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = std::isfinite(values[i]) ? std::clamp<double>(values[i], 0.0, 1.0) : 0.0;
        const auto code = static_cast<std::uint32_t>(std::lround(v * max_code));
        if (bytes_per_sample == 2) {
            rows[2 * i] = static_cast<png_byte>(code >> 8);
            rows[2 * i + 1] = static_cast<png_byte>(code & 0xFF);
        } else {
            rows[i] = static_cast<png_byte>(code);
        }
    }
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    const int color_type = c == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
    if (!encode_png(fp.get(), static_cast<png_uint_32>(plane.width()),
                    static_cast<png_uint_32>(plane.height()), bit_depth, color_type, rows.data(),
                    rowbytes)) {
        throw Error(ErrorKind::IoError, "PNG encoding failed for " + path.string());
    }
    if (std::fflush(fp.get()) != 0) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

}  // namespace

bool has_image_extension(const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    return ext == ".png" || ext == ".pfm";
}

Plane<float> read_pfm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::DecodeError, "cannot open " + path.string());
    std::string magic;
    int width = 0;
    int height = 0;
    double scale = 0.0;
    in >> magic >> width >> height >> scale;
    if (!in || (magic != "PF" && magic != "Pf") || width <= 0 || height <= 0 || scale == 0.0) {
        throw Error(ErrorKind::DecodeError, "bad PFM header in " + path.string());
    }
    in.get();  // single whitespace byte before the raster
    const int channels = magic == "PF" ? 3 : 1;
    const bool big_endian = scale > 0.0;

    Plane<float> plane(height, width, channels);
    const std::size_t row_values = static_cast<std::size_t>(width) * channels;
    std::vector<std::uint32_t> raw(row_values);
    for (int file_row = 0; file_row < height; ++file_row) {
        in.read(reinterpret_cast<char*>(raw.data()),
                static_cast<std::streamsize>(row_values * sizeof(float)));
        if (static_cast<std::size_t>(in.gcount()) != row_values * sizeof(float)) {
            throw Error(ErrorKind::DecodeError, "truncated PFM raster in " + path.string());
        }
        auto dst = plane.row(height - 1 - file_row);
        for (std::size_t i = 0; i < row_values; ++i) {
            std::uint32_t bits = raw[i];
            if (big_endian == (std::endian::native == std::endian::little)) bits = byteswap32(bits);
            dst[i] = std::bit_cast<float>(bits);
        }
    }
    return plane;
}

void write_pfm(const std::filesystem::path& path, const Plane<float>& plane) {
    const int c = plane.channels();
    if (c != 1 && c != 3) {
        throw Error(ErrorKind::WrongChannelCount, "PFM stores 1 or 3 channels, got " +
                                                      std::to_string(c));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    out << (c == 3 ? "PF" : "Pf") << '\n' << plane.width() << ' ' << plane.height() << '\n'
        << "-1.0\n";
    const std::size_t row_values = static_cast<std::size_t>(plane.width()) * c;
    std::vector<std::uint32_t> raw(row_values);
    for (int file_row = 0; file_row < plane.height(); ++file_row) {
        auto src = plane.row(plane.height() - 1 - file_row);
        for (std::size_t i = 0; i < row_values; ++i) {
            std::uint32_t bits = std::bit_cast<std::uint32_t>(src[i]);
            if constexpr (std::endian::native == std::endian::big) bits = byteswap32(bits);
            raw[i] = bits;
        }
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(row_values * sizeof(float)));
    }
    if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

ImagePlane read_png_rgb(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw Error(ErrorKind::DecodeError, "cannot open " + path.string());
    DecodedPng png;
    const char* message = nullptr;
    if (!decode_png(fp.get(), png, &message)) {
        throw Error(ErrorKind::DecodeError, path.string() + ": " + message);
    }
    ImagePlane plane(static_cast<int>(png.height), static_cast<int>(png.width), 3);
    auto dst = plane.values();
    if (png.bit_depth == 16) {
        for (std::size_t i = 0; i < dst.size(); ++i) {
            const unsigned code = (static_cast<unsigned>(png.bytes[2 * i]) << 8) | png.bytes[2 * i + 1];
            dst[i] = static_cast<float>(code / 65535.0);
        }
    } else {
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] = static_cast<float>(png.bytes[i] / 255.0);
        }
    }
    return plane;
}

void write_png16(const std::filesystem::path& path, const ImagePlane& plane) {
    write_png(path, plane, 16);
}

void write_png8(const std::filesystem::path& path, const ImagePlane& plane) {
    write_png(path, plane, 8);
}

ImagePlane read_rgb_image(const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    if (ext == ".png") return read_png_rgb(path);
    if (ext != ".pfm") throw Error(ErrorKind::DecodeError, "unsupported image type: " + path.string());

    Plane<float> raw = read_pfm(path);
    ImagePlane rgb(raw.height(), raw.width(), 3);
    for (int y = 0; y < raw.height(); ++y) {
        for (int x = 0; x < raw.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                const float v = raw(y, x, raw.channels() == 3 ? c : 0);
                if (!std::isfinite(v)) {
                    throw Error(ErrorKind::DecodeError, "non-finite sample in " + path.string());
                }
                rgb(y, x, c) = std::clamp(v, 0.0f, 1.0f);
            }
        }
    }
    return rgb;
}

}  // namespace nightforge::io
