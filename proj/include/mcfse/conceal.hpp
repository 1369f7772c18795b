#pragma once

#include "mcfse/baselines.hpp"
#include "mcfse/fse.hpp"
#include "mcfse/loss_model.hpp"
#include "mcfse/motion.hpp"
#include "mcfse/volume.hpp"

#include <functional>
#include <optional>
#include <string>

namespace mcfse {

enum class Algorithm { kTr, kEbma, kDmve, kFse3d, kMcfse };

const char* algorithm_name(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(const std::string& name);

struct ConcealConfig {
    Algorithm algorithm = Algorithm::kMcfse;
    int prev_frames = 2;   // N_p
    int next_frames = 2;   // N_f
    int border = 16;       // support band width in the lost block's frame
    int band_width = 4;    // decision ring width for motion estimation
    int d_max = 16;        // full-search range, fullpel
    double t_abs = 100.0;  // per-pixel worst-error threshold
    double t_rel = 3.0;    // error-spread threshold
    int ebma_boundary_width = 1;
    FseConfig fse;
};

// What happened to one block. The residual-energy trace is filled for the
// extrapolation algorithms only.
struct BlockOutcome {
    LossBlock block;
    bool ok = false;
    std::string error;
    bool used_fse = false;
    bool aligned = false;        // volume was motion-compensated
    MotionVectorSet vectors;     // per-offset estimates (may be empty)
    std::vector<double> residual_energy;
};

struct ConcealResult {
    Sequence sequence;
    std::vector<BlockOutcome> blocks;

    int failed_blocks() const {
        int n = 0;
        for (const auto& b : blocks) n += b.ok ? 0 : 1;
        return n;
    }
};

// Heavy per-block artifacts, handed to the observer right after a block is
// modeled so callers can trace or dump without conceal retaining them.
using BlockObserver = std::function<void(const BlockOutcome&, const VolumeD&,
                                         const FseModel<double>&)>;

// Full pipeline for one lost block: estimate motion towards every used
// frame, gate on reliability, assemble the (aligned or plain) volume, and
// extrapolate. `available` is the caller's working availability state.
PlaneU8 conceal_block_mcfse(const Sequence& seq, const AvailabilityMaps& available,
                            const LossBlock& block, const ConcealConfig& config);

// The ablation: same volume and extrapolation without motion compensation.
PlaneU8 conceal_block_fse3d(const Sequence& seq, const AvailabilityMaps& available,
                            const LossBlock& block, const ConcealConfig& config);

// Conceals every block of the mask in deterministic order (ascending
// frame, raster within a frame). Concealed blocks become support for later
// ones. Per-block failures are recorded and leave the block zero-filled.
ConcealResult conceal_sequence(const Sequence& corrupted, const LossMask& mask,
                               const ConcealConfig& config,
                               const BlockObserver& observer = nullptr);

}  // namespace mcfse
