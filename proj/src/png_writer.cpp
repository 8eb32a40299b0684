#include <zlib.h>

#include "hapview/error.hpp"
#include "hapview/render.hpp"

namespace hapview {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v >> 24));
    out.push_back(static_cast<char>(v >> 16));
    out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v));
}

void put_chunk(std::string& out, const char type[4], const std::string& data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t start = out.size();
    out.append(type, 4);
    out += data;
    const auto* bytes = reinterpret_cast<const Bytef*>(out.data() + start);
    put_u32(out, static_cast<std::uint32_t>(crc32(0L, bytes, static_cast<uInt>(out.size() - start))));
}

}  // namespace

std::string encode_png(const Raster& raster) {
    static const char signature[] = {'\x89', 'P', 'N', 'G', '\r', '\n', '\x1a', '\n'};
    std::string out(signature, sizeof signature);

    std::string header;
    put_u32(header, static_cast<std::uint32_t>(raster.width));
    put_u32(header, static_cast<std::uint32_t>(raster.height));
    header += std::string{'\x08', '\x02', '\x00', '\x00', '\x00'};  // 8-bit RGB, deflate, no filter, no interlace
    put_chunk(out, "IHDR", header);

    const std::size_t stride = 3 * raster.width;
    std::string scanlines;
    scanlines.reserve((stride + 1) * raster.height);
    for (std::size_t y = 0; y < raster.height; ++y) {
        scanlines.push_back('\0');
        scanlines.append(reinterpret_cast<const char*>(raster.pixels.data() + y * stride), stride);
    }
    uLongf compressed_size = compressBound(static_cast<uLong>(scanlines.size()));
    std::string compressed(compressed_size, '\0');
    if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &compressed_size,
                  reinterpret_cast<const Bytef*>(scanlines.data()), static_cast<uLong>(scanlines.size()), 6) != Z_OK)
        throw Error(ErrorKind::IoError, "zlib compression failed");
    compressed.resize(compressed_size);
    put_chunk(out, "IDAT", compressed);
    put_chunk(out, "IEND", {});
    return out;
}

}  // namespace hapview
