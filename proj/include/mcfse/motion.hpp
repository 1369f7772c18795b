#pragma once

#include "mcfse/loss_model.hpp"
#include "mcfse/types.hpp"

#include <optional>

namespace mcfse {

// Ring of available pixels around a lost block, used to score candidate
// displacements. Coordinates are (x, y) in the block's own frame.
struct DecisionArea {
    int band_width = 0;
    std::vector<std::pair<int, int>> coords;

    int size() const { return static_cast<int>(coords.size()); }
    bool empty() const { return coords.empty(); }
};

// Displacement estimate towards frame tau+kappa with its minimum SSE.
struct MotionVector {
    int kappa = 0;
    int dx = 0;
    int dy = 0;
    double sse = 0.0;  // integer-valued sum of squared 8-bit differences
};

using MotionVectorSet = std::vector<MotionVector>;

// Ring of width `band_width` around the block, clipped to the frame and
// restricted to available pixels. Pixels lost to neighbouring blocks are
// excluded, so the ring may shrink.
DecisionArea build_decision_area(const LossBlock& block, const PlaneBool& available,
                                 int band_width);

// Sum of squared errors between the ring in frame tau and the ring shifted
// by (dx, dy) in frame tau+kappa. Returns nullopt when any shifted pixel
// falls outside the reference frame or onto an unavailable sample.
std::optional<double> sse_for_candidate(const Sequence& seq,
                                        const AvailabilityMaps& available,
                                        const DecisionArea& area, int tau, int kappa,
                                        int dx, int dy);

// Full search over the (2*d_max+1)^2 grid. Ties are broken by smaller
// Euclidean norm, then lexicographically by (dx, dy). Returns nullopt when
// the decision area is empty or no candidate is feasible.
std::optional<MotionVector> estimate_motion(const Sequence& seq,
                                            const AvailabilityMaps& available,
                                            const DecisionArea& area, int tau, int kappa,
                                            int d_max);

// Two-threshold gate on the estimates: per-pixel worst error above t_abs,
// or error spread (max-min)/mean above t_rel, discards the vectors. An
// all-zero error set is reliable (the spread quotient is defined as 0).
bool check_reliability(const MotionVectorSet& vectors, int area_size, double t_abs,
                       double t_rel);

}  // namespace mcfse
