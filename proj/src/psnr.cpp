#include "mcfse/psnr.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mcfse {

namespace {

PsnrResult from_accumulator(long long sum_sq, long long pixels) {
    if (pixels <= 0) throw std::runtime_error("PSNR needs at least one lost pixel");
    PsnrResult result;
    result.lost_pixels = pixels;
    result.mse = static_cast<double>(sum_sq) / static_cast<double>(pixels);
    result.infinite = sum_sq == 0;
    result.db = result.infinite ? 0.0 : mse_to_db(result.mse);
    return result;
}

}  // namespace

double mse_to_db(double mse) { return 10.0 * std::log10(255.0 * 255.0 / mse); }

PsnrResult psnr_lost_pixels(const Sequence& original, const Sequence& concealed,
                            const LossMask& mask) {
    if (!original.same_geometry(concealed) || original.width != mask.width ||
        original.height != mask.height || original.frame_count() != mask.frame_count()) {
        throw std::runtime_error("PSNR inputs have mismatched geometry");
    }

    long long sum_sq = 0;
    long long pixels = 0;
    for (int t = 0; t < original.frame_count(); ++t) {
        const PlaneBool& avail = mask.available[t];
        if (avail.all()) continue;
        const PlaneU8& a = original.luma[t];
        const PlaneU8& b = concealed.luma[t];
        for (int y = 0; y < original.height; ++y) {
            for (int x = 0; x < original.width; ++x) {
                if (avail(y, x)) continue;
                const int diff = static_cast<int>(a(y, x)) - static_cast<int>(b(y, x));
                sum_sq += static_cast<long long>(diff) * diff;
                ++pixels;
            }
        }
    }
    return from_accumulator(sum_sq, pixels);
}

PsnrResult psnr_block(const Sequence& original, const Sequence& concealed,
                      const LossBlock& block) {
    long long sum_sq = 0;
    const PlaneU8& a = original.luma[block.frame];
    const PlaneU8& b = concealed.luma[block.frame];
    for (int y = block.y0; y < block.y0 + block.size; ++y) {
        for (int x = block.x0; x < block.x0 + block.size; ++x) {
            const int diff = static_cast<int>(a(y, x)) - static_cast<int>(b(y, x));
            sum_sq += static_cast<long long>(diff) * diff;
        }
    }
    return from_accumulator(sum_sq, static_cast<long long>(block.size) * block.size);
}

std::string format_psnr(const PsnrResult& result, int decimals) {
    if (result.infinite) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, result.db);
    return buf;
}

}  // namespace mcfse
