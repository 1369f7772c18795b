#include "mcfse/volume.hpp"

#include "mcfse/synthetic.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace mcfse;

namespace {

LossMask one_block(const Sequence& seq, int tau, int x0, int y0, int size = 16) {
    return build_mask_from_blocks(seq.width, seq.height, seq.frame_count(),
                                  {{tau, x0, y0, size}});
}

}  // namespace

TEST_CASE("volume: paper geometry 48x48x5") {
    const Sequence seq = make_static(128, 128, 7, 3);
    const LossMask mask = one_block(seq, 3, 56, 56);
    const VolumeD vol =
        assemble_volume<double>(seq, mask.available, mask.blocks[0], nullptr, 2, 2, 16);

    CHECK(vol.width == 48);
    CHECK(vol.height == 48);
    CHECK(vol.depth == 5);
    CHECK(vol.center_plane == 2);
    CHECK(vol.plane_kappa == std::vector<int>{-2, -1, 0, 1, 2});
    CHECK(vol.block_x == 16);
    CHECK(vol.block_size == 16);

    // LOST appears exactly on the center-plane block
    for (int p = 0; p < vol.depth; ++p) {
        long lost = 0;
        for (int n = 0; n < vol.height; ++n) {
            for (int m = 0; m < vol.width; ++m) {
                if (vol.label_at(m, n, p) == Label::kLost) ++lost;
            }
        }
        CHECK(lost == (p == vol.center_plane ? 256 : 0));
    }

    // static + no vectors: all planes identical outside the lost block
    for (int p = 0; p < vol.depth; ++p) {
        for (int n = 0; n < vol.height; ++n) {
            for (int m = 0; m < vol.width; ++m) {
                if (vol.label_at(m, n, p) != Label::kSupport) continue;
                CHECK(vol.samples[p](n, m) ==
                      static_cast<double>(seq.luma[3](56 - 16 + n, 56 - 16 + m)));
            }
        }
    }
}

TEST_CASE("volume: P shrinks at the sequence ends") {
    const Sequence seq = make_static(96, 96, 3, 5);
    const LossMask mask = one_block(seq, 0, 40, 40);
    const VolumeD vol =
        assemble_volume<double>(seq, mask.available, mask.blocks[0], nullptr, 2, 2, 16);
    CHECK(vol.depth == 3);
    CHECK(vol.center_plane == 0);
    CHECK(vol.plane_kappa == std::vector<int>{0, 1, 2});
}

TEST_CASE("volume: exact vectors align a translating sequence") {
    const Sequence seq = make_translating(160, 160, 5, -5, 2, 11);
    const LossMask mask = one_block(seq, 2, 72, 72);
    MotionVectorSet vectors;
    for (int kappa : {-2, -1, 1, 2}) {
        vectors.push_back({kappa, -5 * kappa, 2 * kappa, 0.0});
    }
    const VolumeD vol =
        assemble_volume<double>(seq, mask.available, mask.blocks[0], &vectors, 2, 2, 16);

    // per-position variance of co-located SUPPORT samples is zero
    for (int n = 0; n < vol.height; ++n) {
        for (int m = 0; m < vol.width; ++m) {
            double first = -1.0;
            for (int p = 0; p < vol.depth; ++p) {
                if (vol.label_at(m, n, p) != Label::kSupport) continue;
                if (first < 0.0) {
                    first = vol.samples[p](n, m);
                } else {
                    CHECK(vol.samples[p](n, m) == first);
                }
            }
        }
    }
}

TEST_CASE("volume: aligned windows leaving the frame become UNAVAILABLE") {
    const Sequence seq = make_translating(96, 96, 3, 12, 0, 13);
    const LossMask mask = one_block(seq, 1, 8, 40);
    MotionVectorSet vectors = {{-1, -12, 0, 0.0}, {1, 12, 0, 0.0}};
    const VolumeD vol =
        assemble_volume<double>(seq, mask.available, mask.blocks[0], &vectors, 1, 1, 16);

    // previous plane window starts at x = 8-16-12 = -20: 20 columns out of frame
    int unavailable_cols = 0;
    for (int m = 0; m < vol.width; ++m) {
        if (vol.label_at(m, 0, 0) == Label::kUnavailable) ++unavailable_cols;
    }
    CHECK(unavailable_cols == 20);

    // labels partition the volume
    for (int p = 0; p < vol.depth; ++p) {
        for (int n = 0; n < vol.height; ++n) {
            for (int m = 0; m < vol.width; ++m) {
                const auto l = vol.label_at(m, n, p);
                CHECK((l == Label::kSupport || l == Label::kLost ||
                       l == Label::kUnavailable));
            }
        }
    }
}

TEST_CASE("volume: no vectors equals the direct cut-out, lost neighbours excluded") {
    const Sequence seq = test::random_sequence(96, 96, 5, 17);
    const LossMask mask = build_mask_from_blocks(
        96, 96, 5, {{2, 40, 40, 16}, {1, 40, 40, 16}});  // co-located loss in frame 1
    const LossBlock& block = mask.blocks[1];  // the frame-2 block
    REQUIRE(block.frame == 2);
    const VolumeD vol =
        assemble_volume<double>(seq, mask.available, block, nullptr, 2, 2, 16);

    // the frame-1 plane has the co-located loss marked UNAVAILABLE
    const int p1 = 1;  // kappa = -1
    REQUIRE(vol.plane_kappa[p1] == -1);
    for (int n = 16; n < 32; ++n) {
        for (int m = 16; m < 32; ++m) {
            CHECK(vol.label_at(m, n, p1) == Label::kUnavailable);
        }
    }
    // everything else in that plane is the direct cut-out
    for (int n = 0; n < 48; ++n) {
        for (int m = 0; m < 48; ++m) {
            if (vol.label_at(m, n, p1) != Label::kSupport) continue;
            CHECK(vol.samples[p1](n, m) == static_cast<double>(seq.luma[1](24 + n, 24 + m)));
        }
    }
}

TEST_CASE("volume: a fully smothered block is rejected") {
    const Sequence seq = test::random_sequence(48, 48, 1, 23);
    // every pixel of the frame is lost: no support anywhere
    const LossMask mask = build_mask_from_blocks(48, 48, 1, {{0, 0, 0, 48}});
    LossBlock inner{0, 16, 16, 16};
    CHECK_THROWS(assemble_volume<double>(seq, mask.available, inner, nullptr, 0, 0, 16));
}
