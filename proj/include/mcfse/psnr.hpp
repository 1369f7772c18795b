#pragma once

#include "mcfse/loss_model.hpp"
#include "mcfse/types.hpp"

#include <string>

namespace mcfse {

// Pooled quality over lost pixels: the squared error is accumulated over
// every lost sample of every frame first, PSNR is computed on that single
// MSE (no per-block dB averaging).
struct PsnrResult {
    double mse = 0.0;
    long long lost_pixels = 0;
    bool infinite = false;  // zero MSE
    double db = 0.0;        // meaningless when infinite
};

PsnrResult psnr_lost_pixels(const Sequence& original, const Sequence& concealed,
                            const LossMask& mask);

// Same pooling over one block only.
PsnrResult psnr_block(const Sequence& original, const Sequence& concealed,
                      const LossBlock& block);

// "inf" or fixed-point dB.
std::string format_psnr(const PsnrResult& result, int decimals = 2);

double mse_to_db(double mse);

}  // namespace mcfse
