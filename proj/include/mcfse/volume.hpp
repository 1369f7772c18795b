#pragma once

#include "mcfse/loss_model.hpp"
#include "mcfse/motion.hpp"
#include "mcfse/types.hpp"

#include <stdexcept>

namespace mcfse {

enum class Label : std::uint8_t {
    kSupport = 0,      // correctly received (or previously concealed) sample
    kLost = 1,         // the block being concealed
    kUnavailable = 2,  // outside the frame or lost to another block
};

// Spatio-temporal sample cube around a lost block. Plane `center_plane`
// is the window in the block's own frame; the other planes are windows in
// neighbouring frames, displaced by the per-offset motion vectors when the
// volume is aligned. UNAVAILABLE and LOST samples hold zeros.
template <class Scalar>
struct ExtrapolationVolume {
    int width = 0;   // M
    int height = 0;  // N
    int depth = 0;   // P

    std::vector<PlaneT<Scalar>> samples;
    std::vector<PlaneT<std::uint8_t>> labels;

    int center_plane = 0;
    std::vector<int> plane_kappa;  // frame offset of each plane, ascending

    // location of the lost block within a plane
    int block_x = 0;
    int block_y = 0;
    int block_size = 0;

    Label label_at(int m, int n, int p) const {
        return static_cast<Label>(labels[p](n, m));
    }
};

using VolumeD = ExtrapolationVolume<double>;

// Cuts the (size + 2*border)^2 x (prev+next+1) volume out of the sequence.
// With `vectors` the neighbour windows follow the estimated displacements;
// without, the cube is the direct spatio-temporal cut-out. Planes that
// would reach past the ends of the sequence are dropped and P shrinks.
template <class Scalar>
ExtrapolationVolume<Scalar> assemble_volume(const Sequence& seq,
                                            const AvailabilityMaps& available,
                                            const LossBlock& block,
                                            const MotionVectorSet* vectors,
                                            int prev_frames, int next_frames, int border) {
    if (border < 0 || prev_frames < 0 || next_frames < 0) {
        throw std::runtime_error("volume extents must be non-negative");
    }
    const int tau = block.frame;
    if (tau < 0 || tau >= seq.frame_count()) {
        throw std::runtime_error("lost block frame outside the sequence");
    }

    ExtrapolationVolume<Scalar> vol;
    vol.width = block.size + 2 * border;
    vol.height = block.size + 2 * border;
    vol.block_x = border;
    vol.block_y = border;
    vol.block_size = block.size;

    for (int kappa = -prev_frames; kappa <= next_frames; ++kappa) {
        const int t = tau + kappa;
        if (t < 0 || t >= seq.frame_count()) continue;  // shrink P at sequence ends

        int shift_x = 0;
        int shift_y = 0;
        if (vectors != nullptr && kappa != 0) {
            for (const MotionVector& v : *vectors) {
                if (v.kappa == kappa) {
                    shift_x = v.dx;
                    shift_y = v.dy;
                    break;
                }
            }
        }

        PlaneT<Scalar> plane = PlaneT<Scalar>::Zero(vol.height, vol.width);
        PlaneT<std::uint8_t> label = PlaneT<std::uint8_t>::Constant(
            vol.height, vol.width, static_cast<std::uint8_t>(Label::kUnavailable));

        const int base_x = block.x0 - border + shift_x;
        const int base_y = block.y0 - border + shift_y;
        for (int n = 0; n < vol.height; ++n) {
            for (int m = 0; m < vol.width; ++m) {
                const int sx = base_x + m;
                const int sy = base_y + n;
                if (!in_frame(sx, sy, seq.width, seq.height)) continue;
                if (kappa == 0 && m >= border && m < border + block.size && n >= border &&
                    n < border + block.size) {
                    label(n, m) = static_cast<std::uint8_t>(Label::kLost);
                    continue;
                }
                if (!available[t](sy, sx)) continue;
                label(n, m) = static_cast<std::uint8_t>(Label::kSupport);
                plane(n, m) = static_cast<Scalar>(seq.luma[t](sy, sx));
            }
        }

        if (kappa == 0) vol.center_plane = static_cast<int>(vol.samples.size());
        vol.samples.push_back(std::move(plane));
        vol.labels.push_back(std::move(label));
        vol.plane_kappa.push_back(kappa);
    }
    vol.depth = static_cast<int>(vol.samples.size());

    const auto& center = vol.labels[vol.center_plane];
    if (!(center == static_cast<std::uint8_t>(Label::kSupport)).any()) {
        throw std::runtime_error("lost block has no available neighbour pixels");
    }
    return vol;
}

}  // namespace mcfse
