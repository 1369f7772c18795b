#include "mcfse/synthetic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace mcfse {

namespace {

void check_geometry(int width, int height, int frames) {
    if (width <= 0 || height <= 0 || frames < 0) {
        throw std::runtime_error("invalid synthetic sequence geometry");
    }
}

std::uint8_t quantize(double value) {
    const double rounded = std::floor(value + 0.5);
    return static_cast<std::uint8_t>(std::min(255.0, std::max(0.0, rounded)));
}

}  // namespace

PlaneU8 make_texture(int width, int height, std::uint32_t seed) {
    check_geometry(width, height, 0);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> freq(0.02, 0.45);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::uniform_int_distribution<int> sign(0, 1);

    // a dozen incommensurate oriented waves: locally distinctive (no flat
    // plateaus to fool block matching) yet band-limited
    constexpr int kWaves = 12;
    double fx[kWaves], fy[kWaves], ph[kWaves], amp[kWaves];
    for (int k = 0; k < kWaves; ++k) {
        fx[k] = freq(rng) * (sign(rng) ? 1 : -1);
        fy[k] = freq(rng) * (sign(rng) ? 1 : -1);
        ph[k] = phase(rng);
        amp[k] = 34.0 / (k + 1);
    }

    PlaneU8 plane(height, width);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double v = 128.0;
            for (int k = 0; k < kWaves; ++k) {
                v += amp[k] * std::cos(2.0 * M_PI * (fx[k] * x + fy[k] * y) + ph[k]);
            }
            plane(y, x) = quantize(v);
        }
    }
    return plane;
}

Sequence make_translating(int width, int height, int frames, int dx, int dy,
                          std::uint32_t seed, int noise_amplitude) {
    check_geometry(width, height, frames);
    const int span = frames > 0 ? frames - 1 : 0;
    const int base_w = width + span * std::abs(dx);
    const int base_h = height + span * std::abs(dy);
    const int ox = span * std::max(dx, 0);
    const int oy = span * std::max(dy, 0);
    const PlaneU8 base = make_texture(base_w, base_h, seed);

    std::mt19937 noise_rng(seed ^ 0x9e3779b9u);
    std::uniform_int_distribution<int> noise(-noise_amplitude, noise_amplitude);

    Sequence seq;
    seq.width = width;
    seq.height = height;
    for (int t = 0; t < frames; ++t) {
        PlaneU8 frame(height, width);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const std::uint8_t v = base(oy + y - t * dy, ox + x - t * dx);
                frame(y, x) = noise_amplitude > 0
                                  ? quantize(static_cast<double>(v) + noise(noise_rng))
                                  : v;
            }
        }
        seq.luma.push_back(std::move(frame));
    }
    return seq;
}

Sequence make_static(int width, int height, int frames, std::uint32_t seed) {
    return make_translating(width, height, frames, 0, 0, seed);
}

Sequence make_constant(int width, int height, int frames, std::uint8_t value) {
    check_geometry(width, height, frames);
    Sequence seq;
    seq.width = width;
    seq.height = height;
    seq.luma.assign(frames, PlaneU8::Constant(height, width, value));
    return seq;
}

Sequence make_zoom(int width, int height, int frames, int step, std::uint32_t seed) {
    check_geometry(width, height, frames);
    if (step < 0) throw std::runtime_error("zoom step must be non-negative");
    const int span = frames > 0 ? frames - 1 : 0;
    const int base_w = width + 2 * step * span;
    const int base_h = height + 2 * step * span;
    const PlaneU8 base = make_texture(base_w, base_h, seed);

    Sequence seq;
    seq.width = width;
    seq.height = height;
    for (int t = 0; t < frames; ++t) {
        // later frames crop a smaller window: the camera zooms in
        const int crop_w = width + 2 * step * (span - t);
        const int crop_h = height + 2 * step * (span - t);
        const int cx = (base_w - crop_w) / 2;
        const int cy = (base_h - crop_h) / 2;
        PlaneU8 frame(height, width);
        for (int y = 0; y < height; ++y) {
            const int sy = cy + static_cast<int>((static_cast<long>(y) * crop_h) / height);
            for (int x = 0; x < width; ++x) {
                const int sx =
                    cx + static_cast<int>((static_cast<long>(x) * crop_w) / width);
                frame(y, x) = base(sy, sx);
            }
        }
        seq.luma.push_back(std::move(frame));
    }
    return seq;
}

Sequence make_scene_cut(int width, int height, int frames, int cut_frame,
                        std::uint32_t seed) {
    check_geometry(width, height, frames);
    const PlaneU8 first = make_texture(width, height, seed);
    const PlaneU8 second = make_texture(width, height, seed + 0x5bd1e995u);
    Sequence seq;
    seq.width = width;
    seq.height = height;
    for (int t = 0; t < frames; ++t) {
        seq.luma.push_back(t < cut_frame ? first : second);
    }
    return seq;
}

}  // namespace mcfse
