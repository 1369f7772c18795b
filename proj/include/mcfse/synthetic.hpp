#pragma once

#include "mcfse/types.hpp"

#include <cstdint>

namespace mcfse {

// Deterministic test material. All generators are pure functions of their
// parameters; the same seed always yields the same sequence.

// Band-limited random texture (sum of oriented cosines) with a little
// per-pixel dither so flat plateaus stay locally distinctive.
PlaneU8 make_texture(int width, int height, std::uint32_t seed);

// Content translates by exactly (dx, dy) pixels per frame. With
// noise_amplitude > 0, independent per-frame noise of that many grey
// levels is added on top (breaking exact temporal matches).
Sequence make_translating(int width, int height, int frames, int dx, int dy,
                          std::uint32_t seed, int noise_amplitude = 0);

Sequence make_static(int width, int height, int frames, std::uint32_t seed);

Sequence make_constant(int width, int height, int frames, std::uint8_t value);

// Fullpel zoom approximation: each frame crops a steadily smaller centered
// window from a base texture and nearest-neighbour resamples it back up.
Sequence make_zoom(int width, int height, int frames, int step, std::uint32_t seed);

// Static texture A up to (excluding) cut_frame, unrelated static texture B
// afterwards.
Sequence make_scene_cut(int width, int height, int frames, int cut_frame,
                        std::uint32_t seed);

}  // namespace mcfse
