#pragma once

#include "mcfse/loss_model.hpp"
#include "mcfse/motion.hpp"
#include "mcfse/types.hpp"

#include <optional>

namespace mcfse {

// Temporal replacement: the co-located block from the previous frame.
// Throws when the block sits in the first frame.
PlaneU8 conceal_tr(const Sequence& seq, const LossBlock& block);

// Extended boundary matching: full search over |d| <= d_max in the
// previous frame for the candidate block whose surrounding ring of
// `boundary_width` pixels best matches (SSD) the available ring around the
// lost block. Returns nullopt when no candidate is feasible; the caller
// falls back to temporal replacement.
std::optional<PlaneU8> conceal_ebma(const Sequence& seq, const AvailabilityMaps& available,
                                    const LossBlock& block, int d_max, int boundary_width);

// Decoder motion-vector estimation: the previous-frame block displaced by
// the full-search estimate over a `band_width` decision ring. Falls back
// to temporal replacement when no candidate is feasible.
PlaneU8 conceal_dmve(const Sequence& seq, const AvailabilityMaps& available,
                     const LossBlock& block, int d_max, int band_width);

}  // namespace mcfse
