#include "roadwork/image.hpp"

#include "roadwork/errors.hpp"

#include <doctest.h>
#include <zlib.h>

#include <array>
#include <random>

using namespace roadwork;
using img::Image;

namespace {

Image random_image(std::mt19937& rng, int w, int h, int channels) {
    Image im;
    im.width = w;
    im.height = h;
    im.channels = channels;
    im.pixels.resize(static_cast<size_t>(w) * h * channels);
    std::uniform_int_distribution<int> byte(0, 255);
    for (auto& p : im.pixels) p = static_cast<std::uint8_t>(byte(rng));
    return im;
}

// Hand-assembled PNG with explicit filter bytes per scanline, to exercise
// the decoder on filters our encoder never emits.
std::vector<std::uint8_t> make_png(int w, int h, int color_type,
                                   const std::vector<std::uint8_t>& raw_with_filters) {
    std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    auto u32 = [&](std::vector<std::uint8_t>& v, std::uint32_t x) {
        v.push_back(x >> 24); v.push_back(x >> 16); v.push_back(x >> 8); v.push_back(x);
    };
    auto chunk = [&](const char type[4], const std::vector<std::uint8_t>& data) {
        u32(out, static_cast<std::uint32_t>(data.size()));
        const size_t crc_start = out.size();
        out.insert(out.end(), type, type + 4);
        out.insert(out.end(), data.begin(), data.end());
        const uLong crc =
            ::crc32(::crc32(0L, nullptr, 0), out.data() + crc_start, out.size() - crc_start);
        u32(out, static_cast<std::uint32_t>(crc));
    };
    std::vector<std::uint8_t> ihdr;
    u32(ihdr, w); u32(ihdr, h);
    ihdr.push_back(8);
    ihdr.push_back(static_cast<std::uint8_t>(color_type));
    ihdr.push_back(0); ihdr.push_back(0); ihdr.push_back(0);
    chunk("IHDR", ihdr);

    uLongf bound = ::compressBound(raw_with_filters.size());
    std::vector<std::uint8_t> compressed(bound);
    REQUIRE(::compress2(compressed.data(), &bound, raw_with_filters.data(),
                        raw_with_filters.size(), 6) == Z_OK);
    compressed.resize(bound);
    chunk("IDAT", compressed);
    chunk("IEND", {});
    return out;
}

} // namespace

TEST_CASE("encode / decode round trip preserves pixels") {
    std::mt19937 rng(101);
    for (int channels : {3, 4}) {
        for (int trial = 0; trial < 4; ++trial) {
            const Image im = random_image(rng, 17 + trial * 13, 9 + trial * 7, channels);
            const auto bytes = img::encode_png(im);
            const Image back = img::decode_png(bytes);
            CHECK(back.width == im.width);
            CHECK(back.height == im.height);
            CHECK(back.channels == im.channels);
            CHECK(back.pixels == im.pixels);
        }
    }
}

TEST_CASE("decoder undoes Sub, Up, Average and Paeth filters") {
    // 3x3 RGB, pixel value = x * 40 + y * 10 + channel.
    const int w = 3, h = 3, bpp = 3;
    std::vector<std::uint8_t> plain(static_cast<size_t>(w) * h * bpp);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < bpp; ++c)
                plain[(y * w + x) * bpp + c] = static_cast<std::uint8_t>(x * 40 + y * 10 + c);

    auto row = [&](int y, int i) { return plain[y * w * bpp + i]; };
    std::vector<std::uint8_t> raw;
    // Row 0: Sub filter.
    raw.push_back(1);
    for (int i = 0; i < w * bpp; ++i) {
        const int left = i >= bpp ? row(0, i - bpp) : 0;
        raw.push_back(static_cast<std::uint8_t>(row(0, i) - left));
    }
    // Row 1: Up filter.
    raw.push_back(2);
    for (int i = 0; i < w * bpp; ++i)
        raw.push_back(static_cast<std::uint8_t>(row(1, i) - row(0, i)));
    // Row 2: alternate Average and Paeth on separate decodes; use Average here.
    raw.push_back(3);
    for (int i = 0; i < w * bpp; ++i) {
        const int left = i >= bpp ? row(2, i - bpp) : 0;
        raw.push_back(static_cast<std::uint8_t>(row(2, i) - (left + row(1, i)) / 2));
    }

    const auto png = make_png(w, h, 2, raw);
    const Image im = img::decode_png(png);
    REQUIRE(im.channels == 3);
    CHECK(im.pixels == plain);
}

TEST_CASE("decoder handles Paeth-filtered rows") {
    const int w = 4, h = 2, bpp = 3;
    std::vector<std::uint8_t> plain(static_cast<size_t>(w) * h * bpp);
    for (size_t i = 0; i < plain.size(); ++i) plain[i] = static_cast<std::uint8_t>(i * 7 + 3);

    auto paeth = [](int a, int b, int c) {
        const int p = a + b - c, pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
        if (pa <= pb && pa <= pc) return a;
        if (pb <= pc) return b;
        return c;
    };
    std::vector<std::uint8_t> raw;
    raw.push_back(0);
    for (int i = 0; i < w * bpp; ++i) raw.push_back(plain[i]);
    raw.push_back(4);
    for (int i = 0; i < w * bpp; ++i) {
        const int left = i >= bpp ? plain[w * bpp + i - bpp] : 0;
        const int up = plain[i];
        const int ul = i >= bpp ? plain[i - bpp] : 0;
        raw.push_back(static_cast<std::uint8_t>(plain[w * bpp + i] - paeth(left, up, ul)));
    }
    const Image im = img::decode_png(make_png(w, h, 2, raw));
    CHECK(im.pixels == plain);
}

TEST_CASE("palette images expand to RGB(A)") {
    // 2x1 palette image: index 0 opaque red, index 1 transparent.
    std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    auto u32 = [&](std::vector<std::uint8_t>& v, std::uint32_t x) {
        v.push_back(x >> 24); v.push_back(x >> 16); v.push_back(x >> 8); v.push_back(x);
    };
    auto chunk = [&](const char type[4], const std::vector<std::uint8_t>& data) {
        u32(out, static_cast<std::uint32_t>(data.size()));
        const size_t s = out.size();
        out.insert(out.end(), type, type + 4);
        out.insert(out.end(), data.begin(), data.end());
        const uLong crc = ::crc32(::crc32(0L, nullptr, 0), out.data() + s, out.size() - s);
        u32(out, static_cast<std::uint32_t>(crc));
    };
    std::vector<std::uint8_t> ihdr;
    u32(ihdr, 2); u32(ihdr, 1);
    ihdr.insert(ihdr.end(), {8, 3, 0, 0, 0});
    chunk("IHDR", ihdr);
    chunk("PLTE", {200, 30, 30, 10, 10, 10});
    chunk("tRNS", {255, 0});
    std::vector<std::uint8_t> raw = {0, 0, 1};   // filter none, indices 0 and 1
    uLongf bound = ::compressBound(raw.size());
    std::vector<std::uint8_t> comp(bound);
    REQUIRE(::compress2(comp.data(), &bound, raw.data(), raw.size(), 6) == Z_OK);
    comp.resize(bound);
    chunk("IDAT", comp);
    chunk("IEND", {});

    const Image im = img::decode_png(out);
    REQUIRE(im.channels == 4);
    CHECK(im.at(0, 0)[0] == 200);
    CHECK(im.at(0, 0)[3] == 255);
    CHECK(im.at(1, 0)[3] == 0);
}

TEST_CASE("garbage bytes are rejected") {
    std::vector<std::uint8_t> junk = {1, 2, 3, 4, 5};
    CHECK_THROWS_AS(img::decode_png(junk), Error);
    Image empty;
    CHECK_THROWS_AS(img::encode_png(empty), Error);
}
