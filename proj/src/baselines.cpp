#include "mcfse/baselines.hpp"

#include <stdexcept>
#include <tuple>

namespace mcfse {

namespace {

PlaneU8 block_from_frame(const Sequence& seq, int t, int x0, int y0, int size) {
    return seq.luma[t].block(y0, x0, size, size);
}

bool block_usable(const Sequence& seq, const AvailabilityMaps& available, int t, int x0,
                  int y0, int size) {
    if (!in_frame(x0, y0, seq.width, seq.height) ||
        !in_frame(x0 + size - 1, y0 + size - 1, seq.width, seq.height)) {
        return false;
    }
    return available[t].block(y0, x0, size, size).all();
}

// Full search in the previous frame with the motion module's scoring and
// tie-breaking, plus the constraint that the displaced block itself can be
// copied (inside the frame, every sample available).
std::optional<MotionVector> search_previous_block(const Sequence& seq,
                                                  const AvailabilityMaps& available,
                                                  const DecisionArea& ring,
                                                  const LossBlock& block, int d_max) {
    if (ring.empty()) return std::nullopt;

    std::optional<MotionVector> best;
    long best_norm2 = 0;
    for (int dy = -d_max; dy <= d_max; ++dy) {
        for (int dx = -d_max; dx <= d_max; ++dx) {
            if (!block_usable(seq, available, block.frame - 1, block.x0 + dx,
                              block.y0 + dy, block.size)) {
                continue;
            }
            const auto sse =
                sse_for_candidate(seq, available, ring, block.frame, /*kappa=*/-1, dx, dy);
            if (!sse) continue;
            const long norm2 = static_cast<long>(dx) * dx + static_cast<long>(dy) * dy;
            if (!best || std::tie(*sse, norm2, dx, dy) <
                             std::tie(best->sse, best_norm2, best->dx, best->dy)) {
                best = MotionVector{-1, dx, dy, *sse};
                best_norm2 = norm2;
            }
        }
    }
    return best;
}

}  // namespace

PlaneU8 conceal_tr(const Sequence& seq, const LossBlock& block) {
    if (block.frame <= 0) {
        throw std::runtime_error("temporal replacement needs a previous frame");
    }
    return block_from_frame(seq, block.frame - 1, block.x0, block.y0, block.size);
}

std::optional<PlaneU8> conceal_ebma(const Sequence& seq, const AvailabilityMaps& available,
                                    const LossBlock& block, int d_max, int boundary_width) {
    if (block.frame <= 0) {
        throw std::runtime_error("boundary matching needs a previous frame");
    }
    const DecisionArea ring =
        build_decision_area(block, available[block.frame], boundary_width);
    const auto best = search_previous_block(seq, available, ring, block, d_max);
    if (!best) return std::nullopt;
    return block_from_frame(seq, block.frame - 1, block.x0 + best->dx, block.y0 + best->dy,
                            block.size);
}

PlaneU8 conceal_dmve(const Sequence& seq, const AvailabilityMaps& available,
                     const LossBlock& block, int d_max, int band_width) {
    if (block.frame <= 0) {
        throw std::runtime_error("motion-vector estimation needs a previous frame");
    }
    const DecisionArea ring = build_decision_area(block, available[block.frame], band_width);
    const auto best = search_previous_block(seq, available, ring, block, d_max);
    if (best) {
        return block_from_frame(seq, block.frame - 1, block.x0 + best->dx,
                                block.y0 + best->dy, block.size);
    }
    return conceal_tr(seq, block);
}

}  // namespace mcfse
