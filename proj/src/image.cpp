#include "roadwork/image.hpp"

#include "roadwork/errors.hpp"

#include <zlib.h>

#include <array>
#include <cstring>
#include <string>

namespace roadwork::img {

namespace {

const std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::uint32_t read_u32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void write_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(std::uint8_t(v >> 24));
    out.push_back(std::uint8_t(v >> 16));
    out.push_back(std::uint8_t(v >> 8));
    out.push_back(std::uint8_t(v));
}

std::vector<std::uint8_t> zlib_inflate(const std::vector<std::uint8_t>& in, size_t expected) {
    std::vector<std::uint8_t> out(expected);
    uLongf out_len = static_cast<uLongf>(out.size());
    int rc = ::uncompress(out.data(), &out_len, in.data(), static_cast<uLong>(in.size()));
    if (rc != Z_OK) throw Error("png: zlib inflate failed (rc " + std::to_string(rc) + ")");
    if (out_len != expected)
        throw Error("png: decompressed size mismatch");
    return out;
}

std::vector<std::uint8_t> zlib_deflate(const std::vector<std::uint8_t>& in) {
    uLongf bound = ::compressBound(static_cast<uLong>(in.size()));
    std::vector<std::uint8_t> out(bound);
    int rc = ::compress2(out.data(), &bound, in.data(), static_cast<uLong>(in.size()),
                         Z_DEFAULT_COMPRESSION);
    if (rc != Z_OK) throw Error("png: zlib deflate failed");
    out.resize(bound);
    return out;
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

void unfilter(std::vector<std::uint8_t>& raw, int height, size_t stride, int bpp) {
    for (int y = 0; y < height; ++y) {
        std::uint8_t* row = raw.data() + static_cast<size_t>(y) * (stride + 1);
        const std::uint8_t filter = row[0];
        std::uint8_t* cur = row + 1;
        const std::uint8_t* prev =
            y > 0 ? raw.data() + static_cast<size_t>(y - 1) * (stride + 1) + 1 : nullptr;
        switch (filter) {
        case 0:
            break;
        case 1:   // Sub
            for (size_t i = bpp; i < stride; ++i) cur[i] = std::uint8_t(cur[i] + cur[i - bpp]);
            break;
        case 2:   // Up
            if (prev)
                for (size_t i = 0; i < stride; ++i) cur[i] = std::uint8_t(cur[i] + prev[i]);
            break;
        case 3:   // Average
            for (size_t i = 0; i < stride; ++i) {
                const int left = i >= size_t(bpp) ? cur[i - bpp] : 0;
                const int up = prev ? prev[i] : 0;
                cur[i] = std::uint8_t(cur[i] + (left + up) / 2);
            }
            break;
        case 4:   // Paeth
            for (size_t i = 0; i < stride; ++i) {
                const int left = i >= size_t(bpp) ? cur[i - bpp] : 0;
                const int up = prev ? prev[i] : 0;
                const int ul = (prev && i >= size_t(bpp)) ? prev[i - bpp] : 0;
                cur[i] = std::uint8_t(cur[i] + paeth(left, up, ul));
            }
            break;
        default:
            throw Error("png: unknown filter type " + std::to_string(filter));
        }
    }
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::vector<std::uint8_t>& data) {
    write_u32(out, static_cast<std::uint32_t>(data.size()));
    const size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uLong crc = ::crc32(::crc32(0L, nullptr, 0), out.data() + crc_start,
                              static_cast<uInt>(out.size() - crc_start));
    write_u32(out, static_cast<std::uint32_t>(crc));
}

} // namespace

Image decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSignature.data(), 8) != 0)
        throw Error("png: bad signature");

    int width = 0, height = 0, bit_depth = 0, color_type = -1, interlace = 0;
    std::vector<std::uint8_t> idat;
    std::vector<std::array<std::uint8_t, 3>> palette;
    std::vector<std::uint8_t> palette_alpha;

    size_t pos = 8;
    bool seen_iend = false;
    while (pos + 8 <= bytes.size() && !seen_iend) {
        const std::uint32_t len = read_u32(&bytes[pos]);
        if (pos + 12 + len > bytes.size()) throw Error("png: truncated chunk");
        const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
        const std::uint8_t* data = &bytes[pos + 8];

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw Error("png: bad IHDR");
            width = static_cast<int>(read_u32(data));
            height = static_cast<int>(read_u32(data + 4));
            bit_depth = data[8];
            color_type = data[9];
            interlace = data[12];
        } else if (std::memcmp(type, "PLTE", 4) == 0) {
            if (len % 3 != 0) throw Error("png: bad PLTE");
            for (std::uint32_t i = 0; i + 2 < len; i += 3)
                palette.push_back({data[i], data[i + 1], data[i + 2]});
        } else if (std::memcmp(type, "tRNS", 4) == 0 && color_type == 3) {
            palette_alpha.assign(data, data + len);
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            seen_iend = true;
        }
        pos += 12 + len;
    }

    if (width <= 0 || height <= 0) throw Error("png: missing or empty IHDR");
    if (bit_depth != 8) throw Error("png: unsupported bit depth " + std::to_string(bit_depth));
    if (interlace != 0) throw Error("png: interlaced images not supported");
    if (idat.empty()) throw Error("png: no IDAT data");

    int src_channels;
    switch (color_type) {
    case 0: src_channels = 1; break;   // grayscale
    case 2: src_channels = 3; break;   // RGB
    case 3: src_channels = 1; break;   // palette index
    case 6: src_channels = 4; break;   // RGBA
    default:
        throw Error("png: unsupported color type " + std::to_string(color_type));
    }
    if (color_type == 3 && palette.empty()) throw Error("png: palette image without PLTE");

    const size_t stride = static_cast<size_t>(width) * src_channels;
    auto raw = zlib_inflate(idat, static_cast<size_t>(height) * (stride + 1));
    unfilter(raw, height, stride, src_channels);

    Image out;
    out.width = width;
    out.height = height;
    const bool has_alpha = color_type == 6 || (color_type == 3 && !palette_alpha.empty());
    out.channels = has_alpha ? 4 : 3;
    out.pixels.resize(static_cast<size_t>(width) * height * out.channels);

    for (int y = 0; y < height; ++y) {
        const std::uint8_t* src = raw.data() + static_cast<size_t>(y) * (stride + 1) + 1;
        for (int x = 0; x < width; ++x) {
            std::uint8_t* dst = out.at(x, y);
            const std::uint8_t* s = src + static_cast<size_t>(x) * src_channels;
            switch (color_type) {
            case 0:
                dst[0] = dst[1] = dst[2] = s[0];
                break;
            case 2:
                dst[0] = s[0]; dst[1] = s[1]; dst[2] = s[2];
                break;
            case 3: {
                const std::uint8_t idx = s[0];
                if (idx >= palette.size()) throw Error("png: palette index out of range");
                dst[0] = palette[idx][0];
                dst[1] = palette[idx][1];
                dst[2] = palette[idx][2];
                if (has_alpha)
                    dst[3] = idx < palette_alpha.size() ? palette_alpha[idx] : 255;
                break;
            }
            case 6:
                dst[0] = s[0]; dst[1] = s[1]; dst[2] = s[2]; dst[3] = s[3];
                break;
            }
        }
    }
    return out;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
    if (image.width <= 0 || image.height <= 0)
        throw Error("png: cannot encode empty image");
    if (image.channels != 3 && image.channels != 4)
        throw Error("png: encode expects 3 or 4 channels");
    if (image.pixels.size() != static_cast<size_t>(image.width) * image.height * image.channels)
        throw Error("png: pixel buffer size mismatch");

    std::vector<std::uint8_t> out(kPngSignature.begin(), kPngSignature.end());

    std::vector<std::uint8_t> ihdr;
    write_u32(ihdr, static_cast<std::uint32_t>(image.width));
    write_u32(ihdr, static_cast<std::uint32_t>(image.height));
    ihdr.push_back(8);                                        // bit depth
    ihdr.push_back(image.channels == 4 ? 6 : 2);              // color type
    ihdr.push_back(0);                                        // compression
    ihdr.push_back(0);                                        // filter method
    ihdr.push_back(0);                                        // no interlace
    append_chunk(out, "IHDR", ihdr);

    const size_t stride = static_cast<size_t>(image.width) * image.channels;
    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<size_t>(image.height) * (stride + 1));
    for (int y = 0; y < image.height; ++y) {
        raw.push_back(0);   // filter type: none
        const std::uint8_t* row = image.pixels.data() + static_cast<size_t>(y) * stride;
        raw.insert(raw.end(), row, row + stride);
    }
    append_chunk(out, "IDAT", zlib_deflate(raw));
    append_chunk(out, "IEND", {});
    return out;
}

} // namespace roadwork::img
