#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace roadwork::img {

// Decoded 8-bit raster, row-major, 3 (RGB) or 4 (RGBA) channels.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> pixels;

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
    const std::uint8_t* at(int x, int y) const {
        return pixels.data() + (static_cast<size_t>(y) * width + x) * channels;
    }
    std::uint8_t* at(int x, int y) {
        return pixels.data() + (static_cast<size_t>(y) * width + x) * channels;
    }
};

// PNG decode. Supports 8-bit grayscale, RGB, palette (with optional
// transparency) and RGBA, non-interlaced. Throws roadwork::Error on
// anything it cannot parse.
Image decode_png(std::span<const std::uint8_t> bytes);

// PNG encode of a 3- or 4-channel image (8-bit, non-interlaced).
std::vector<std::uint8_t> encode_png(const Image& image);

} // namespace roadwork::img
