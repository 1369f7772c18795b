#include "mcfse/loss_model.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace mcfse;
using test::TempDir;

TEST_CASE("isolated pattern: grid placement on CIF matches the enumeration") {
    const std::vector<int> frames = {17, 47, 77, 107, 137};
    const LossMask mask = build_isolated_pattern(352, 288, 150, frames, 16, 64, 64, 16);

    // independent enumeration of the expected grid
    std::vector<LossBlock> expected;
    for (int t : frames) {
        for (int y = 16; y + 16 <= 288; y += 64) {
            for (int x = 16; x + 16 <= 352; x += 64) {
                expected.push_back({t, x, y, 16});
            }
        }
    }
    REQUIRE(mask.blocks.size() == expected.size());
    CHECK(mask.blocks.size() == 5u * 6u * 5u);
    for (const LossBlock& b : mask.blocks) {
        CHECK((b.x0 - 16) % 64 == 0);
        CHECK((b.y0 - 16) % 64 == 0);
        CHECK(b.x0 + b.size <= 352);
        CHECK(b.y0 + b.size <= 288);
    }

    // availability is false exactly on the union of blocks
    long long lost = 0;
    for (int t = 0; t < 150; ++t) lost += (mask.available[t] == false).count();
    CHECK(lost == static_cast<long long>(expected.size()) * 16 * 16);
}

TEST_CASE("isolated pattern: empty frame list and merging strides") {
    const LossMask empty = build_isolated_pattern(64, 64, 10, {}, 16, 64, 64, 16);
    CHECK(empty.blocks.empty());
    for (const auto& plane : empty.available) CHECK(plane.all());

    CHECK_THROWS(build_isolated_pattern(64, 64, 10, {0}, 16, 8, 64, 16));
}

TEST_CASE("mask validation: out-of-frame and out-of-range blocks") {
    CHECK_THROWS(build_mask_from_blocks(32, 32, 4, {{0, 20, 20, 16}}));
    CHECK_THROWS(build_mask_from_blocks(32, 32, 4, {{4, 0, 0, 16}}));
    CHECK_THROWS(build_mask_from_blocks(32, 32, 4, {{-1, 0, 0, 16}}));
}

TEST_CASE("blocks are ordered ascending frame then raster") {
    const LossMask mask = build_mask_from_blocks(
        64, 64, 4, {{2, 0, 0, 8}, {0, 40, 40, 8}, {0, 8, 40, 8}, {0, 16, 0, 8}});
    REQUIRE(mask.blocks.size() == 4);
    CHECK(mask.blocks[0] == LossBlock{0, 16, 0, 8});
    CHECK(mask.blocks[1] == LossBlock{0, 8, 40, 8});
    CHECK(mask.blocks[2] == LossBlock{0, 40, 40, 8});
    CHECK(mask.blocks[3] == LossBlock{2, 0, 0, 8});
}

TEST_CASE("apply_loss zero-fills exactly the lost samples and is idempotent") {
    const Sequence seq = test::random_sequence(48, 48, 3, 21);

    const LossMask none = build_mask_from_blocks(48, 48, 3, {});
    CHECK(apply_loss(seq, none) == seq);

    const LossMask one = build_mask_from_blocks(48, 48, 3, {{1, 16, 16, 16}});
    const Sequence corrupted = apply_loss(seq, one);
    CHECK(corrupted.luma[0].isApprox(seq.luma[0]));
    CHECK((corrupted.luma[1].block(16, 16, 16, 16) == 0).all());

    long long differing = 0;
    for (int y = 0; y < 48; ++y) {
        for (int x = 0; x < 48; ++x) {
            if (corrupted.luma[1](y, x) != seq.luma[1](y, x)) ++differing;
        }
    }
    long long zeros_in_source = (seq.luma[1].block(16, 16, 16, 16) == 0).count();
    CHECK(differing == 256 - zeros_in_source);

    CHECK(apply_loss(corrupted, one) == corrupted);
}

TEST_CASE("apply_loss: full-frame loss and geometry mismatch") {
    const Sequence seq = test::random_sequence(16, 16, 2, 3);
    const LossMask full = build_mask_from_blocks(16, 16, 2, {{0, 0, 0, 16}});
    CHECK((apply_loss(seq, full).luma[0] == 0).all());

    const LossMask other = build_mask_from_blocks(8, 8, 2, {});
    CHECK_THROWS(apply_loss(seq, other));
}

TEST_CASE("pattern file round trip") {
    TempDir dir("pattern");
    const LossMask mask =
        build_mask_from_blocks(64, 64, 8, {{1, 0, 0, 16}, {3, 32, 16, 8}});
    write_pattern_file(mask, dir / "p.txt");
    const LossMask back = load_pattern_file(dir / "p.txt", 64, 64, 8);
    REQUIRE(back.blocks.size() == mask.blocks.size());
    for (std::size_t i = 0; i < mask.blocks.size(); ++i) {
        CHECK(back.blocks[i] == mask.blocks[i]);
    }
    CHECK_THROWS(load_pattern_file(dir / "missing.txt", 64, 64, 8));
}
