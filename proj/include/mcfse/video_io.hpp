#pragma once

#include "mcfse/types.hpp"

#include <filesystem>
#include <stdexcept>

namespace mcfse {

enum class ChromaMode {
    C420,  // 4:2:0, even dimensions required
    C400,  // luma only
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::uint64_t offset);
    std::uint64_t byte_offset = 0;
};

// Chroma planes of a 4:2:0 stream, kept only so writers can splice them
// back into concealed output. Concealment itself never reads them.
struct ChromaPlanes {
    std::vector<PlaneU8> cb;
    std::vector<PlaneU8> cr;
    bool empty() const { return cb.empty(); }
};

// Y4M (YUV4MPEG2) reader. Accepts C420* and C400/mono streams; returns the
// luma planes only. Throws ParseError with the offending byte offset.
Sequence load_y4m(const std::filesystem::path& path);

// Same stream, chroma planes only. Returns empty planes for C400 input.
ChromaPlanes load_y4m_chroma(const std::filesystem::path& path);

// Headerless planar YUV. Frame count is derived from the file size; a
// non-integral frame count is an error that reports the remainder.
Sequence load_raw_yuv(const std::filesystem::path& path, int width, int height,
                      ChromaMode mode);
ChromaPlanes load_raw_yuv_chroma(const std::filesystem::path& path, int width,
                                 int height, ChromaMode mode);

// Writes 4:2:0 output with constant-128 chroma unless `chroma` carries the
// planes of the source stream. Odd-sized sequences fall back to C400.
void write_y4m(const Sequence& seq, const std::filesystem::path& path,
               const ChromaPlanes* chroma = nullptr);

// Binary PGM (P5), maxval 255.
void write_pgm(const PlaneU8& frame, const std::filesystem::path& path);

}  // namespace mcfse
