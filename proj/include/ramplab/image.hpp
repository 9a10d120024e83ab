#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ramplab {

using Rgb = std::array<std::uint8_t, 3>;

// Dense interleaved 8-bit RGB raster. Used both for full equirectangular
// panoramas and for perspective crops.
struct ImageRgb {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // width * height * 3, row-major RGB

    ImageRgb() = default;
    ImageRgb(int w, int h, Rgb fill = {0, 0, 0});

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    Rgb at(int x, int y) const {
        const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        return {data[i], data[i + 1], data[i + 2]};
    }
    void set(int x, int y, Rgb c) {
        const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        data[i] = c[0];
        data[i + 1] = c[1];
        data[i + 2] = c[2];
    }

    bool operator==(const ImageRgb& o) const {
        return width == o.width && height == o.height && data == o.data;
    }
};

// Records the integer texel indices a sampling pass touched; used by tests to
// prove reads never leave the raster.
struct SampleBounds {
    int min_x = 1 << 30, max_x = -(1 << 30);
    int min_y = 1 << 30, max_y = -(1 << 30);
    void note(int x, int y) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }
};

// Bilinear sample with horizontal wrap (x is periodic) and vertical clamp.
// Coordinates are pixel-centered: (0,0) samples the first pixel exactly.
Rgb sample_wrap_clamp(const ImageRgb& img, double x, double y, SampleBounds* trace = nullptr);

// Mirror about the vertical axis (x -> width-1-x).
ImageRgb hflip(const ImageRgb& img);

// PNG/JPEG file IO. Throws std::runtime_error on failure.
ImageRgb load_image(const std::string& path);
void save_png(const std::string& path, const ImageRgb& img);

// Encode to in-memory PNG (deterministic bytes for a given raster).
std::vector<std::uint8_t> encode_png(const ImageRgb& img);
ImageRgb decode_image(const std::vector<std::uint8_t>& bytes);

// 16-bit single-channel PNG of values clamped from [0,1] (x65535), used for
// heatmap debug dumps.
void save_gray16_png(const std::string& path, int width, int height,
                     const std::vector<double>& values);

}  // namespace ramplab
