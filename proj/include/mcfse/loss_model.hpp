#pragma once

#include "mcfse/types.hpp"

#include <filesystem>

namespace mcfse {

// One square lost block: top-left corner (x0, y0) in frame `frame`.
struct LossBlock {
    int frame = 0;
    int x0 = 0;
    int y0 = 0;
    int size = 0;
};

inline bool operator==(const LossBlock& a, const LossBlock& b) {
    return a.frame == b.frame && a.x0 == b.x0 && a.y0 == b.y0 && a.size == b.size;
}

// Availability maps plus the block list that produced them. `available`
// is false exactly on the union of the block rectangles. Blocks are kept
// in concealment order: ascending frame, then raster within the frame.
struct LossMask {
    int width = 0;
    int height = 0;
    AvailabilityMaps available;
    std::vector<LossBlock> blocks;

    int frame_count() const { return static_cast<int>(available.size()); }
};

// Regular grid of isolated losses at (offset + i*stride_x, offset + j*stride_y)
// in each listed frame. Blocks that would stick out of the frame are dropped.
// Requires stride >= block_size so blocks never merge.
LossMask build_isolated_pattern(int width, int height, int frame_count,
                                const std::vector<int>& frame_indices, int block_size,
                                int stride_x, int stride_y, int offset);

// Explicit block list; validates every block against the frame geometry.
LossMask build_mask_from_blocks(int width, int height, int frame_count,
                                std::vector<LossBlock> blocks);

// Text pattern file: one `frame x0 y0 size` line per block, '#' comments.
LossMask load_pattern_file(const std::filesystem::path& path, int width, int height,
                           int frame_count);
void write_pattern_file(const LossMask& mask, const std::filesystem::path& path);

// Returns a copy of `seq` with the lost samples zero-filled. Algorithms
// must consult the mask, never the fill value.
Sequence apply_loss(const Sequence& seq, const LossMask& mask);

}  // namespace mcfse
