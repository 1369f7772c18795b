#include "mcfse/conceal.hpp"

#include <stdexcept>

namespace mcfse {

namespace {

struct FseArtifacts {
    VolumeD volume;
    FseModel<double> model;
    bool aligned = false;
    MotionVectorSet vectors;
};

PlaneU8 conceal_block_fse(const Sequence& seq, const AvailabilityMaps& available,
                          const LossBlock& block, const ConcealConfig& config,
                          bool compensate, FseArtifacts* artifacts) {
    MotionVectorSet vectors;
    bool aligned = false;

    if (compensate) {
        const DecisionArea area =
            build_decision_area(block, available[block.frame], config.band_width);
        bool estimation_ok = !area.empty();
        for (int kappa = -config.prev_frames; kappa <= config.next_frames && estimation_ok;
             ++kappa) {
            if (kappa == 0) continue;
            const int t = block.frame + kappa;
            if (t < 0 || t >= seq.frame_count()) continue;  // plane is dropped anyway
            const auto est =
                estimate_motion(seq, available, area, block.frame, kappa, config.d_max);
            if (!est) {
                estimation_ok = false;  // degrade to the uncompensated volume
                break;
            }
            vectors.push_back(*est);
        }
        aligned = estimation_ok && !vectors.empty() &&
                  check_reliability(vectors, area.size(), config.t_abs, config.t_rel);
    }

    VolumeD volume =
        assemble_volume<double>(seq, available, block, aligned ? &vectors : nullptr,
                                config.prev_frames, config.next_frames, config.border);
    FseModel<double> model = fse_generate_model(volume, config.fse);
    PlaneU8 patch = cut_patch(model, volume);

    if (artifacts != nullptr) {
        artifacts->aligned = aligned;
        artifacts->vectors = std::move(vectors);
        artifacts->volume = std::move(volume);
        artifacts->model = std::move(model);
    }
    return patch;
}

}  // namespace

const char* algorithm_name(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::kTr: return "tr";
        case Algorithm::kEbma: return "ebma";
        case Algorithm::kDmve: return "dmve";
        case Algorithm::kFse3d: return "fse3d";
        case Algorithm::kMcfse: return "mcfse";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
    if (name == "tr") return Algorithm::kTr;
    if (name == "ebma") return Algorithm::kEbma;
    if (name == "dmve") return Algorithm::kDmve;
    if (name == "fse3d" || name == "3dfse") return Algorithm::kFse3d;
    if (name == "mcfse") return Algorithm::kMcfse;
    return std::nullopt;
}

PlaneU8 conceal_block_mcfse(const Sequence& seq, const AvailabilityMaps& available,
                            const LossBlock& block, const ConcealConfig& config) {
    return conceal_block_fse(seq, available, block, config, /*compensate=*/true, nullptr);
}

PlaneU8 conceal_block_fse3d(const Sequence& seq, const AvailabilityMaps& available,
                            const LossBlock& block, const ConcealConfig& config) {
    return conceal_block_fse(seq, available, block, config, /*compensate=*/false, nullptr);
}

ConcealResult conceal_sequence(const Sequence& corrupted, const LossMask& mask,
                               const ConcealConfig& config, const BlockObserver& observer) {
    if (corrupted.width != mask.width || corrupted.height != mask.height ||
        corrupted.frame_count() != mask.frame_count()) {
        throw std::runtime_error("loss mask geometry does not match the sequence");
    }

    ConcealResult result;
    result.sequence = corrupted;
    AvailabilityMaps available = mask.available;

    for (const LossBlock& block : mask.blocks) {
        BlockOutcome outcome;
        outcome.block = block;
        try {
            PlaneU8 patch;
            FseArtifacts artifacts;
            switch (config.algorithm) {
                case Algorithm::kTr:
                    patch = conceal_tr(result.sequence, block);
                    break;
                case Algorithm::kEbma: {
                    auto found = conceal_ebma(result.sequence, available, block,
                                              config.d_max, config.ebma_boundary_width);
                    patch = found ? std::move(*found) : conceal_tr(result.sequence, block);
                    break;
                }
                case Algorithm::kDmve:
                    patch = conceal_dmve(result.sequence, available, block, config.d_max,
                                         config.band_width);
                    break;
                case Algorithm::kFse3d:
                case Algorithm::kMcfse: {
                    const bool compensate = config.algorithm == Algorithm::kMcfse;
                    patch = conceal_block_fse(result.sequence, available, block, config,
                                              compensate, &artifacts);
                    outcome.used_fse = true;
                    outcome.aligned = artifacts.aligned;
                    outcome.vectors = artifacts.vectors;
                    outcome.residual_energy.assign(artifacts.model.residual_energy.begin(),
                                                   artifacts.model.residual_energy.end());
                    break;
                }
            }

            result.sequence.luma[block.frame].block(block.y0, block.x0, block.size,
                                                    block.size) = patch;
            available[block.frame]
                .block(block.y0, block.x0, block.size, block.size)
                .setConstant(true);
            outcome.ok = true;
            if (outcome.used_fse && observer) {
                observer(outcome, artifacts.volume, artifacts.model);
            }
        } catch (const std::exception& e) {
            outcome.ok = false;
            outcome.error = e.what();
        }
        result.blocks.push_back(std::move(outcome));
    }
    return result;
}

}  // namespace mcfse
