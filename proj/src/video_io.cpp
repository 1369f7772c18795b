#include "mcfse/video_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

namespace mcfse {

namespace {

constexpr char kY4mMagic[] = "YUV4MPEG2";

struct Y4mHeader {
    int width = -1;
    int height = -1;
    int fps_num = 30;
    int fps_den = 1;
    ChromaMode mode = ChromaMode::C420;  // Y4M default colorspace is 4:2:0
    std::uint64_t payload_offset = 0;    // first byte after the header newline
};

std::uint64_t chroma_bytes(int width, int height, ChromaMode mode) {
    if (mode == ChromaMode::C400) return 0;
    return 2ull * (width / 2) * (height / 2);
}

Y4mHeader parse_y4m_header(std::ifstream& in, const std::filesystem::path& path) {
    std::string magic(sizeof(kY4mMagic) - 1, '\0');
    in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
    if (in.gcount() != static_cast<std::streamsize>(magic.size()) || magic != kY4mMagic) {
        throw ParseError("not a YUV4MPEG2 stream: " + path.string(), 0);
    }

    std::string line;
    if (!std::getline(in, line, '\n')) {
        throw ParseError("unterminated Y4M stream header", magic.size());
    }

    Y4mHeader hdr;
    hdr.payload_offset = magic.size() + line.size() + 1;

    std::istringstream params(line);
    std::string tok;
    while (params >> tok) {
        switch (tok[0]) {
            case 'W':
                hdr.width = std::atoi(tok.c_str() + 1);
                break;
            case 'H':
                hdr.height = std::atoi(tok.c_str() + 1);
                break;
            case 'F': {
                int num = 0, den = 0;
                if (std::sscanf(tok.c_str() + 1, "%d:%d", &num, &den) == 2 && num > 0 &&
                    den > 0) {
                    hdr.fps_num = num;
                    hdr.fps_den = den;
                }
                break;
            }
            case 'C': {
                const std::string cs = tok.substr(1);
                if (cs.rfind("420", 0) == 0) {
                    hdr.mode = ChromaMode::C420;
                } else if (cs == "400" || cs == "mono") {
                    hdr.mode = ChromaMode::C400;
                } else {
                    throw ParseError("unsupported Y4M colorspace C" + cs, magic.size() + 1);
                }
                break;
            }
            default:
                break;  // I/A/X parameters are informational
        }
    }

    if (hdr.width <= 0 || hdr.height <= 0) {
        throw ParseError("Y4M header missing W/H", magic.size() + 1);
    }
    if (hdr.mode == ChromaMode::C420 && (hdr.width % 2 != 0 || hdr.height % 2 != 0)) {
        throw ParseError("odd dimensions with 4:2:0 chroma", magic.size() + 1);
    }
    return hdr;
}

// Positions the stream just past a FRAME marker line; returns false at a
// clean EOF. `offset` tracks the absolute byte position.
bool read_frame_marker(std::ifstream& in, std::uint64_t& offset) {
    char c = 0;
    if (!in.get(c)) return false;
    std::string marker(1, c);
    while (marker.size() < 5 && in.get(c)) marker.push_back(c);
    if (marker != "FRAME") {
        throw ParseError("expected FRAME marker", offset);
    }
    offset += marker.size();
    // frame-level parameters run until the newline
    while (in.get(c)) {
        ++offset;
        if (c == '\n') return true;
    }
    throw ParseError("unterminated FRAME header", offset);
}

void read_exact(std::ifstream& in, char* dst, std::uint64_t n, std::uint64_t offset,
                const char* what) {
    in.read(dst, static_cast<std::streamsize>(n));
    if (in.gcount() != static_cast<std::streamsize>(n)) {
        throw ParseError(std::string("truncated ") + what,
                         offset + static_cast<std::uint64_t>(in.gcount()));
    }
}

// Read-and-discard: unlike seekg this detects truncation at EOF.
void skip_exact(std::ifstream& in, std::uint64_t n, std::uint64_t offset, const char* what) {
    static thread_local std::vector<char> scratch;
    scratch.resize(n);
    read_exact(in, scratch.data(), n, offset, what);
}

PlaneU8 read_plane(std::ifstream& in, int width, int height, std::uint64_t& offset,
                   const char* what) {
    PlaneU8 plane(height, width);
    read_exact(in, reinterpret_cast<char*>(plane.data()),
               static_cast<std::uint64_t>(width) * height, offset, what);
    offset += static_cast<std::uint64_t>(width) * height;
    return plane;
}

std::ifstream open_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

std::uint64_t file_size_of(const std::filesystem::path& path) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (ec) throw std::runtime_error("cannot stat " + path.string() + ": " + ec.message());
    return size;
}

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

ParseError::ParseError(const std::string& what, std::uint64_t offset)
    : std::runtime_error(what + " (byte " + std::to_string(offset) + ")"),
      byte_offset(offset) {}

Sequence load_y4m(const std::filesystem::path& path) {
    std::ifstream in = open_binary(path);
    const Y4mHeader hdr = parse_y4m_header(in, path);

    Sequence seq;
    seq.width = hdr.width;
    seq.height = hdr.height;
    seq.fps_num = hdr.fps_num;
    seq.fps_den = hdr.fps_den;

    std::uint64_t offset = hdr.payload_offset;
    const std::uint64_t cb_cr = chroma_bytes(hdr.width, hdr.height, hdr.mode);
    while (read_frame_marker(in, offset)) {
        seq.luma.push_back(read_plane(in, hdr.width, hdr.height, offset, "luma plane"));
        if (cb_cr > 0) {
            skip_exact(in, cb_cr, offset, "chroma planes");
            offset += cb_cr;
        }
    }
    return seq;
}

ChromaPlanes load_y4m_chroma(const std::filesystem::path& path) {
    std::ifstream in = open_binary(path);
    const Y4mHeader hdr = parse_y4m_header(in, path);

    ChromaPlanes chroma;
    if (hdr.mode == ChromaMode::C400) return chroma;

    const int cw = hdr.width / 2;
    const int ch = hdr.height / 2;
    std::uint64_t offset = hdr.payload_offset;
    while (read_frame_marker(in, offset)) {
        skip_exact(in, static_cast<std::uint64_t>(hdr.width) * hdr.height, offset,
                   "luma plane");
        offset += static_cast<std::uint64_t>(hdr.width) * hdr.height;
        chroma.cb.push_back(read_plane(in, cw, ch, offset, "Cb plane"));
        chroma.cr.push_back(read_plane(in, cw, ch, offset, "Cr plane"));
    }
    return chroma;
}

Sequence load_raw_yuv(const std::filesystem::path& path, int width, int height,
                      ChromaMode mode) {
    if (width <= 0 || height <= 0) throw std::runtime_error("invalid raw dimensions");
    if (mode == ChromaMode::C420 && (width % 2 != 0 || height % 2 != 0)) {
        throw std::runtime_error("odd dimensions with 4:2:0 chroma");
    }

    const std::uint64_t per_frame =
        static_cast<std::uint64_t>(width) * height + chroma_bytes(width, height, mode);
    const std::uint64_t size = file_size_of(path);
    if (size % per_frame != 0) {
        throw std::runtime_error("raw YUV size " + std::to_string(size) +
                                 " is not a multiple of the frame size " +
                                 std::to_string(per_frame) + " (remainder " +
                                 std::to_string(size % per_frame) + ")");
    }

    Sequence seq;
    seq.width = width;
    seq.height = height;
    std::ifstream in = open_binary(path);
    std::uint64_t offset = 0;
    const std::uint64_t frames = size / per_frame;
    for (std::uint64_t t = 0; t < frames; ++t) {
        seq.luma.push_back(read_plane(in, width, height, offset, "luma plane"));
        if (mode == ChromaMode::C420) {
            skip_exact(in, chroma_bytes(width, height, mode), offset, "chroma planes");
            offset += chroma_bytes(width, height, mode);
        }
    }
    return seq;
}

ChromaPlanes load_raw_yuv_chroma(const std::filesystem::path& path, int width, int height,
                                 ChromaMode mode) {
    ChromaPlanes chroma;
    if (mode == ChromaMode::C400) return chroma;
    const Sequence probe = load_raw_yuv(path, width, height, mode);  // validates size

    std::ifstream in = open_binary(path);
    std::uint64_t offset = 0;
    const int cw = width / 2;
    const int ch = height / 2;
    for (int t = 0; t < probe.frame_count(); ++t) {
        skip_exact(in, static_cast<std::uint64_t>(width) * height, offset, "luma plane");
        offset += static_cast<std::uint64_t>(width) * height;
        chroma.cb.push_back(read_plane(in, cw, ch, offset, "Cb plane"));
        chroma.cr.push_back(read_plane(in, cw, ch, offset, "Cr plane"));
    }
    return chroma;
}

void write_y4m(const Sequence& seq, const std::filesystem::path& path,
               const ChromaPlanes* chroma) {
    const bool use_420 = seq.width % 2 == 0 && seq.height % 2 == 0;
    const bool splice = use_420 && chroma != nullptr && !chroma->empty();
    if (splice && static_cast<int>(chroma->cb.size()) < seq.frame_count()) {
        throw std::runtime_error("chroma source has fewer frames than the sequence");
    }

    std::string bytes;
    {
        std::ostringstream hdr;
        hdr << "YUV4MPEG2 W" << seq.width << " H" << seq.height << " F" << seq.fps_num
            << ":" << seq.fps_den << " Ip A1:1 C" << (use_420 ? "420" : "400") << "\n";
        bytes = hdr.str();
    }

    const int cw = seq.width / 2;
    const int ch = seq.height / 2;
    const std::string grey(static_cast<std::size_t>(cw) * ch, static_cast<char>(128));
    for (int t = 0; t < seq.frame_count(); ++t) {
        bytes += "FRAME\n";
        bytes.append(reinterpret_cast<const char*>(seq.luma[t].data()),
                     static_cast<std::size_t>(seq.width) * seq.height);
        if (use_420) {
            if (splice) {
                bytes.append(reinterpret_cast<const char*>(chroma->cb[t].data()),
                             static_cast<std::size_t>(cw) * ch);
                bytes.append(reinterpret_cast<const char*>(chroma->cr[t].data()),
                             static_cast<std::size_t>(cw) * ch);
            } else {
                bytes += grey;
                bytes += grey;
            }
        }
    }
    write_atomic(path, bytes);
}

void write_pgm(const PlaneU8& frame, const std::filesystem::path& path) {
    std::string bytes = "P5\n" + std::to_string(frame.cols()) + " " +
                        std::to_string(frame.rows()) + "\n255\n";
    bytes.append(reinterpret_cast<const char*>(frame.data()),
                 static_cast<std::size_t>(frame.size()));
    write_atomic(path, bytes);
}

}  // namespace mcfse
