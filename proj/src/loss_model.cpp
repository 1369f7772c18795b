#include "mcfse/loss_model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mcfse {

namespace {

void sort_blocks(std::vector<LossBlock>& blocks) {
    std::sort(blocks.begin(), blocks.end(), [](const LossBlock& a, const LossBlock& b) {
        if (a.frame != b.frame) return a.frame < b.frame;
        if (a.y0 != b.y0) return a.y0 < b.y0;
        return a.x0 < b.x0;
    });
}

}  // namespace

LossMask build_mask_from_blocks(int width, int height, int frame_count,
                                std::vector<LossBlock> blocks) {
    if (width <= 0 || height <= 0 || frame_count < 0) {
        throw std::runtime_error("invalid mask geometry");
    }
    LossMask mask;
    mask.width = width;
    mask.height = height;
    mask.available.assign(frame_count, PlaneBool::Constant(height, width, true));

    for (const LossBlock& b : blocks) {
        if (b.frame < 0 || b.frame >= frame_count) {
            throw std::runtime_error("loss block frame " + std::to_string(b.frame) +
                                     " outside sequence of " + std::to_string(frame_count) +
                                     " frames");
        }
        if (b.size <= 0 || b.x0 < 0 || b.y0 < 0 || b.x0 + b.size > width ||
            b.y0 + b.size > height) {
            throw std::runtime_error("loss block does not lie inside the frame");
        }
        mask.available[b.frame].block(b.y0, b.x0, b.size, b.size).setConstant(false);
    }
    sort_blocks(blocks);
    mask.blocks = std::move(blocks);
    return mask;
}

LossMask build_isolated_pattern(int width, int height, int frame_count,
                                const std::vector<int>& frame_indices, int block_size,
                                int stride_x, int stride_y, int offset) {
    if (block_size <= 0) throw std::runtime_error("block size must be positive");
    if (stride_x < block_size || stride_y < block_size) {
        throw std::runtime_error("stride " + std::to_string(std::min(stride_x, stride_y)) +
                                 " smaller than block size " + std::to_string(block_size) +
                                 " would merge blocks");
    }

    std::vector<LossBlock> blocks;
    for (int t : frame_indices) {
        for (int y = offset; y + block_size <= height; y += stride_y) {
            for (int x = offset; x + block_size <= width; x += stride_x) {
                blocks.push_back({t, x, y, block_size});
            }
        }
    }
    return build_mask_from_blocks(width, height, frame_count, std::move(blocks));
}

LossMask load_pattern_file(const std::filesystem::path& path, int width, int height,
                           int frame_count) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pattern file " + path.string());

    std::vector<LossBlock> blocks;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        LossBlock b;
        if (!(fields >> b.frame)) continue;  // blank or comment-only line
        if (!(fields >> b.x0 >> b.y0 >> b.size)) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected `frame x0 y0 size`");
        }
        blocks.push_back(b);
    }
    return build_mask_from_blocks(width, height, frame_count, std::move(blocks));
}

void write_pattern_file(const LossMask& mask, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "# frame x0 y0 size\n";
    for (const LossBlock& b : mask.blocks) {
        out << b.frame << " " << b.x0 << " " << b.y0 << " " << b.size << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Sequence apply_loss(const Sequence& seq, const LossMask& mask) {
    if (seq.width != mask.width || seq.height != mask.height ||
        seq.frame_count() != mask.frame_count()) {
        throw std::runtime_error("loss mask geometry does not match the sequence");
    }
    Sequence out = seq;
    for (int t = 0; t < seq.frame_count(); ++t) {
        out.luma[t] = mask.available[t].select(out.luma[t], PlaneU8::Zero(seq.height, seq.width));
    }
    return out;
}

}  // namespace mcfse
