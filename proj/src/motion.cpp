#include "mcfse/motion.hpp"

#include <cstdint>
#include <stdexcept>
#include <tuple>

namespace mcfse {

DecisionArea build_decision_area(const LossBlock& block, const PlaneBool& available,
                                 int band_width) {
    if (band_width <= 0) throw std::runtime_error("band width must be positive");

    const int width = static_cast<int>(available.cols());
    const int height = static_cast<int>(available.rows());

    DecisionArea area;
    area.band_width = band_width;
    for (int y = block.y0 - band_width; y < block.y0 + block.size + band_width; ++y) {
        for (int x = block.x0 - band_width; x < block.x0 + block.size + band_width; ++x) {
            const bool inside_block = x >= block.x0 && x < block.x0 + block.size &&
                                      y >= block.y0 && y < block.y0 + block.size;
            if (inside_block || !in_frame(x, y, width, height)) continue;
            if (available(y, x)) area.coords.emplace_back(x, y);
        }
    }
    return area;
}

std::optional<double> sse_for_candidate(const Sequence& seq,
                                        const AvailabilityMaps& available,
                                        const DecisionArea& area, int tau, int kappa,
                                        int dx, int dy) {
    const int ref = tau + kappa;
    if (ref < 0 || ref >= seq.frame_count()) return std::nullopt;

    const PlaneU8& cur = seq.luma[tau];
    const PlaneU8& prev = seq.luma[ref];
    const PlaneBool& ref_avail = available[ref];

    std::int64_t sum = 0;
    for (const auto& [x, y] : area.coords) {
        const int rx = x + dx;
        const int ry = y + dy;
        if (!in_frame(rx, ry, seq.width, seq.height)) return std::nullopt;
        if (!ref_avail(ry, rx)) return std::nullopt;
        const int diff = static_cast<int>(cur(y, x)) - static_cast<int>(prev(ry, rx));
        sum += static_cast<std::int64_t>(diff) * diff;
    }
    return static_cast<double>(sum);
}

std::optional<MotionVector> estimate_motion(const Sequence& seq,
                                            const AvailabilityMaps& available,
                                            const DecisionArea& area, int tau, int kappa,
                                            int d_max) {
    if (d_max < 0) throw std::runtime_error("d_max must be non-negative");
    if (area.empty()) return std::nullopt;

    std::optional<MotionVector> best;
    long best_norm2 = 0;
    for (int dy = -d_max; dy <= d_max; ++dy) {
        for (int dx = -d_max; dx <= d_max; ++dx) {
            const auto sse = sse_for_candidate(seq, available, area, tau, kappa, dx, dy);
            if (!sse) continue;
            const long norm2 = static_cast<long>(dx) * dx + static_cast<long>(dy) * dy;
            if (!best || std::tie(*sse, norm2, dx, dy) <
                             std::tie(best->sse, best_norm2, best->dx, best->dy)) {
                best = MotionVector{kappa, dx, dy, *sse};
                best_norm2 = norm2;
            }
        }
    }
    return best;
}

bool check_reliability(const MotionVectorSet& vectors, int area_size, double t_abs,
                       double t_rel) {
    if (vectors.empty()) throw std::runtime_error("reliability check needs estimates");
    if (area_size <= 0) throw std::runtime_error("reliability check needs |M| > 0");

    double max_err = vectors.front().sse;
    double min_err = vectors.front().sse;
    double sum = 0.0;
    for (const MotionVector& v : vectors) {
        max_err = std::max(max_err, v.sse);
        min_err = std::min(min_err, v.sse);
        sum += v.sse;
    }

    if (max_err / area_size > t_abs) return false;

    const double mean = sum / static_cast<double>(vectors.size());
    const double spread = mean > 0.0 ? (max_err - min_err) / mean : 0.0;
    return spread <= t_rel;
}

}  // namespace mcfse
