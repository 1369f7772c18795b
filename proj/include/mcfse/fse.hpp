#pragma once

#include "mcfse/fft3.hpp"
#include "mcfse/volume.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace mcfse {

// Per-sample influence on the model generation. Zero on LOST and
// UNAVAILABLE samples; isotropic decay rho^distance from the volume
// center on SUPPORT.
template <class Scalar>
struct WeightField {
    int width = 0;
    int height = 0;
    int depth = 0;
    std::vector<PlaneT<Scalar>> w;
};

struct FseConfig {
    int fft_width = 64;
    int fft_height = 64;
    int fft_depth = 16;
    double rho_hat = 0.8;       // isotropic weight decay, in (0,1)
    double gamma = 0.6;         // orthogonality deficiency compensation, in (0,1]
    int max_iterations = 100;

    GridDims grid() const { return GridDims{fft_width, fft_height, fft_depth}; }
};

// One selected basis-function pair: `bin` is the linear index of the pair
// representative (the member with the lower index); the conjugate partner
// carries the conjugate coefficient implicitly.
template <class Scalar>
struct FseChoice {
    int iteration = 0;
    long bin = 0;
    std::complex<Scalar> coeff{};
};

template <class Scalar>
struct FseModel {
    std::vector<PlaneT<Scalar>> g;            // model over the volume
    std::vector<FseChoice<Scalar>> chosen;    // one entry per iteration
    std::vector<Scalar> residual_energy;      // sum of w*r^2; [0] is the initial energy
    Scalar max_imag = 0;                      // residual imaginary part of the synthesis
};

template <class Scalar>
WeightField<Scalar> make_weight(const ExtrapolationVolume<Scalar>& volume, double rho_hat) {
    if (!(rho_hat > 0.0 && rho_hat < 1.0)) {
        throw std::runtime_error("rho_hat must lie in (0,1)");
    }
    WeightField<Scalar> field;
    field.width = volume.width;
    field.height = volume.height;
    field.depth = volume.depth;

    const double cm = (volume.width - 1) / 2.0;
    const double cn = (volume.height - 1) / 2.0;
    const double cp = (volume.depth - 1) / 2.0;
    for (int p = 0; p < volume.depth; ++p) {
        PlaneT<Scalar> plane = PlaneT<Scalar>::Zero(volume.height, volume.width);
        for (int n = 0; n < volume.height; ++n) {
            for (int m = 0; m < volume.width; ++m) {
                if (volume.label_at(m, n, p) != Label::kSupport) continue;
                const double dist = std::sqrt((m - cm) * (m - cm) + (n - cn) * (n - cn) +
                                              (p - cp) * (p - cp));
                plane(n, m) = static_cast<Scalar>(std::pow(rho_hat, dist));
            }
        }
        field.w.push_back(std::move(plane));
    }
    return field;
}

// Basis selection: minimizing the weighted distance between the residual
// and its projection onto a basis function is, for the unit-modulus
// Fourier dictionary, the same as maximizing |spectrum[k]|. A bin and its
// conjugate mirror carry the same magnitude on real data and are updated
// jointly; the representative with the lower linear index is returned and
// scored, so ties keep the lowest representative.
template <class Scalar>
long select_basis(const std::vector<std::complex<Scalar>>& spectrum, const GridDims& dims) {
    if (static_cast<long>(spectrum.size()) != dims.total()) {
        throw std::runtime_error("spectrum size does not match the grid");
    }
    long best = 0;
    Scalar best_metric = -1;
    long idx = 0;
    for (int kp = 0; kp < dims.p; ++kp) {
        const int mp = kp == 0 ? 0 : dims.p - kp;
        for (int kn = 0; kn < dims.n; ++kn) {
            const int mn = kn == 0 ? 0 : dims.n - kn;
            for (int km = 0; km < dims.m; ++km, ++idx) {
                const int mm = km == 0 ? 0 : dims.m - km;
                if (dims.index(mm, mn, mp) < idx) continue;  // handled at its representative
                const Scalar metric = std::norm(spectrum[idx]);
                if (metric > best_metric) {
                    best_metric = metric;
                    best = idx;
                }
            }
        }
    }
    return best;
}

namespace detail {

// target[k] -= coeff * source[(k - shift) mod dims], the spectral image of
// subtracting coeff * basis(shift) * w when `source` is the spectrum of w.
template <class Scalar>
void subtract_shifted(std::vector<std::complex<Scalar>>& target,
                      const std::vector<std::complex<Scalar>>& source, const GridDims& dims,
                      long shift_bin, std::complex<Scalar> coeff) {
    int um, un, up;
    dims.split(shift_bin, um, un, up);
    long dst = 0;
    for (int kp = 0; kp < dims.p; ++kp) {
        const int sp = kp >= up ? kp - up : kp - up + dims.p;
        for (int kn = 0; kn < dims.n; ++kn) {
            const int sn = kn >= un ? kn - un : kn - un + dims.n;
            const long base = dims.index(0, sn, sp);
            int sm = um == 0 ? 0 : dims.m - um;
            for (int km = 0; km < dims.m; ++km, ++dst) {
                target[dst] -= coeff * source[base + sm];
                if (++sm == dims.m) sm = 0;
            }
        }
    }
}

// twiddle[j] = exp(-2*pi*i*j/len)
template <class Scalar>
std::vector<std::complex<Scalar>> twiddle_table(int len) {
    std::vector<std::complex<Scalar>> table(len);
    for (int j = 0; j < len; ++j) {
        const double angle = -2.0 * M_PI * j / len;
        table[j] = std::complex<Scalar>(static_cast<Scalar>(std::cos(angle)),
                                        static_cast<Scalar>(std::sin(angle)));
    }
    return table;
}

// Direct evaluation of sum_{volume} field * w * conj(basis_k).
template <class Scalar>
std::complex<Scalar> weighted_projection_numerator(
    const std::vector<PlaneT<Scalar>>& field, const WeightField<Scalar>& weight,
    const GridDims& dims, long bin) {
    int km, kn, kp;
    dims.split(bin, km, kn, kp);
    const auto twm = twiddle_table<Scalar>(dims.m);
    const auto twn = twiddle_table<Scalar>(dims.n);
    const auto twp = twiddle_table<Scalar>(dims.p);

    std::complex<Scalar> sum{};
    for (int p = 0; p < weight.depth; ++p) {
        const auto ep = twp[(static_cast<long>(kp) * p) % dims.p];
        for (int n = 0; n < weight.height; ++n) {
            const auto en = twn[(static_cast<long>(kn) * n) % dims.n];
            for (int m = 0; m < weight.width; ++m) {
                const Scalar w = weight.w[p](n, m);
                if (w == Scalar(0)) continue;
                const auto em = twm[(static_cast<long>(km) * m) % dims.m];
                sum += field[p](n, m) * w * (em * en * ep);
            }
        }
    }
    return sum;
}

template <class Scalar>
Scalar weight_sum(const WeightField<Scalar>& weight) {
    Scalar sum = 0;
    for (const auto& plane : weight.w) sum += plane.sum();
    return sum;
}

template <class Scalar>
Scalar weighted_energy(const std::vector<PlaneT<Scalar>>& field,
                       const WeightField<Scalar>& weight) {
    Scalar sum = 0;
    for (std::size_t p = 0; p < weight.w.size(); ++p) {
        sum += (weight.w[p] * field[p].square()).sum();
    }
    return sum;
}

template <class Scalar>
void validate_fse_inputs(const ExtrapolationVolume<Scalar>& volume, const FseConfig& cfg) {
    if (cfg.fft_width < volume.width || cfg.fft_height < volume.height ||
        cfg.fft_depth < volume.depth) {
        throw std::runtime_error("FFT grid smaller than the extrapolation volume");
    }
    if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) {
        throw std::runtime_error("gamma must lie in (0,1]");
    }
    if (cfg.max_iterations < 0) throw std::runtime_error("negative iteration budget");
}

}  // namespace detail

// Weighted projection of a volume-shaped field onto basis function `bin`
// (the normalized projection coefficient p_k). The denominator reduces to
// sum(w) because every Fourier basis sample has unit modulus.
template <class Scalar>
std::complex<Scalar> project_reference(const std::vector<PlaneT<Scalar>>& residual,
                                       const WeightField<Scalar>& weight,
                                       const GridDims& dims, long bin) {
    const Scalar sumw = detail::weight_sum(weight);
    if (!(sumw > Scalar(0))) throw std::runtime_error("projection needs support samples");
    return detail::weighted_projection_numerator(residual, weight, dims, bin) / sumw;
}

// Fast model generation: greedy selection of Fourier basis pairs on the
// spectrum of the weighted residual. The spectrum is updated per iteration
// by subtracting the circularly shifted weight spectrum, so each iteration
// costs O(grid) instead of O(grid x volume).
template <class Scalar>
FseModel<Scalar> fse_generate_model(const ExtrapolationVolume<Scalar>& volume,
                                    const FseConfig& cfg) {
    detail::validate_fse_inputs(volume, cfg);
    const WeightField<Scalar> weight = make_weight(volume, cfg.rho_hat);
    const Scalar sumw = detail::weight_sum(weight);
    if (!(sumw > Scalar(0))) throw std::runtime_error("volume has no support samples");

    const GridDims dims = cfg.grid();
    Fft3<Scalar> fft(dims);
    using Complex = std::complex<Scalar>;

    std::vector<Complex> wspec(dims.total());
    std::vector<Complex> rspec(dims.total());
    for (int p = 0; p < volume.depth; ++p) {
        for (int n = 0; n < volume.height; ++n) {
            for (int m = 0; m < volume.width; ++m) {
                const long idx = dims.index(m, n, p);
                const Scalar w = weight.w[p](n, m);
                wspec[idx] = w;
                rspec[idx] = volume.samples[p](n, m) * w;
            }
        }
    }
    fft.forward(wspec);
    fft.forward(rspec);

    const Scalar gamma = static_cast<Scalar>(cfg.gamma);
    FseModel<Scalar> model;
    model.residual_energy.reserve(cfg.max_iterations + 1);
    model.residual_energy.push_back(detail::weighted_energy(volume.samples, weight));

    std::vector<Complex> gspec(dims.total(), Complex{});
    Scalar energy = model.residual_energy.front();

    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        const long u = select_basis(rspec, dims);
        const long mu = dims.mirror(u);
        const Complex s = rspec[u];

        int um, un, up;
        dims.split(u, um, un, up);

        Complex coeff;
        if (mu == u) {
            coeff = Complex(gamma * s.real() / sumw, 0);
            const Scalar gain = s.real() * s.real() / sumw;
            energy += (gamma * gamma - 2 * gamma) * gain;
            detail::subtract_shifted(rspec, wspec, dims, u, coeff);
            gspec[u] += coeff * static_cast<Scalar>(dims.total());
        } else {
            coeff = gamma * s / sumw;
            const Scalar gain = std::norm(s) / sumw;
            // second-harmonic weight bin: the pair members interfere through it
            const Complex w2u = wspec[dims.index((2 * um) % dims.m, (2 * un) % dims.n,
                                                 (2 * up) % dims.p)];
            energy += (2 * gamma * gamma - 4 * gamma) * gain +
                      2 * (coeff * coeff * std::conj(w2u)).real();
            detail::subtract_shifted(rspec, wspec, dims, u, coeff);
            detail::subtract_shifted(rspec, wspec, dims, mu, std::conj(coeff));
            gspec[u] += coeff * static_cast<Scalar>(dims.total());
            gspec[mu] += std::conj(coeff) * static_cast<Scalar>(dims.total());
        }

        model.chosen.push_back({iter, u, coeff});
        model.residual_energy.push_back(energy);
    }

    fft.inverse(gspec);
    model.max_imag = 0;
    for (int p = 0; p < volume.depth; ++p) {
        PlaneT<Scalar> plane(volume.height, volume.width);
        for (int n = 0; n < volume.height; ++n) {
            for (int m = 0; m < volume.width; ++m) {
                const Complex value = gspec[dims.index(m, n, p)];
                plane(n, m) = value.real();
                model.max_imag = std::max(model.max_imag, std::abs(value.imag()));
            }
        }
        model.g.push_back(std::move(plane));
    }
    return model;
}

// Verification path: the same greedy loop with every projection evaluated
// by direct weighted summation over the volume and the residual kept in
// the sample domain. O(grid x volume) per iteration; intended for small
// grids and cross-checking the fast path.
template <class Scalar>
FseModel<Scalar> fse_generate_model_reference(const ExtrapolationVolume<Scalar>& volume,
                                              const FseConfig& cfg) {
    detail::validate_fse_inputs(volume, cfg);
    const WeightField<Scalar> weight = make_weight(volume, cfg.rho_hat);
    const Scalar sumw = detail::weight_sum(weight);
    if (!(sumw > Scalar(0))) throw std::runtime_error("volume has no support samples");

    const GridDims dims = cfg.grid();
    using Complex = std::complex<Scalar>;
    const auto twm = detail::twiddle_table<Scalar>(dims.m);
    const auto twn = detail::twiddle_table<Scalar>(dims.n);
    const auto twp = detail::twiddle_table<Scalar>(dims.p);

    FseModel<Scalar> model;
    std::vector<PlaneT<Scalar>> residual = volume.samples;
    for (int p = 0; p < volume.depth; ++p) {
        model.g.push_back(PlaneT<Scalar>::Zero(volume.height, volume.width));
    }
    model.residual_energy.push_back(detail::weighted_energy(residual, weight));

    std::vector<Complex> proj(dims.total());
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        // every projection numerator, by definition
        long idx = 0;
        for (int kp = 0; kp < dims.p; ++kp) {
            for (int kn = 0; kn < dims.n; ++kn) {
                for (int km = 0; km < dims.m; ++km, ++idx) {
                    Complex sum{};
                    for (int p = 0; p < volume.depth; ++p) {
                        const auto ep = twp[(static_cast<long>(kp) * p) % dims.p];
                        for (int n = 0; n < volume.height; ++n) {
                            const auto en = twn[(static_cast<long>(kn) * n) % dims.n];
                            const auto enp = en * ep;
                            for (int m = 0; m < volume.width; ++m) {
                                const Scalar rw = residual[p](n, m) * weight.w[p](n, m);
                                if (rw == Scalar(0)) continue;
                                sum += rw * (twm[(static_cast<long>(km) * m) % dims.m] * enp);
                            }
                        }
                    }
                    proj[idx] = sum;
                }
            }
        }

        // selection on the representative's magnitude, lowest index wins ties
        long u = 0;
        Scalar best_metric = -1;
        for (long k = 0; k < dims.total(); ++k) {
            if (dims.mirror(k) < k) continue;
            const Scalar metric = std::norm(proj[k]);
            if (metric > best_metric) {
                best_metric = metric;
                u = k;
            }
        }
        const long mu = dims.mirror(u);
        const Complex s = proj[u];
        const Complex coeff = mu == u ? Complex(static_cast<Scalar>(cfg.gamma) * s.real() / sumw, 0)
                                      : static_cast<Scalar>(cfg.gamma) * s / sumw;

        int um, un, up;
        dims.split(u, um, un, up);
        for (int p = 0; p < volume.depth; ++p) {
            const auto ep = twp[(static_cast<long>(up) * p) % dims.p];
            for (int n = 0; n < volume.height; ++n) {
                const auto en = twn[(static_cast<long>(un) * n) % dims.n];
                for (int m = 0; m < volume.width; ++m) {
                    // basis sample = conj of forward twiddle product
                    const Complex phase =
                        std::conj(twm[(static_cast<long>(um) * m) % dims.m] * en * ep);
                    const Scalar delta = mu == u ? (coeff * phase).real()
                                                 : 2 * (coeff * phase).real();
                    model.g[p](n, m) += delta;
                    residual[p](n, m) -= delta;
                }
            }
        }

        model.chosen.push_back({iter, u, coeff});
        model.residual_energy.push_back(detail::weighted_energy(residual, weight));
    }
    return model;
}

namespace detail {

template <class Scalar>
PlaneU8 round_patch(const PlaneT<Scalar>& values) {
    PlaneU8 out(values.rows(), values.cols());
    for (Eigen::Index n = 0; n < values.rows(); ++n) {
        for (Eigen::Index m = 0; m < values.cols(); ++m) {
            const double rounded = std::floor(static_cast<double>(values(n, m)) + 0.5);
            out(n, m) = static_cast<std::uint8_t>(std::min(255.0, std::max(0.0, rounded)));
        }
    }
    return out;
}

}  // namespace detail

// The concealment patch: the model restricted to the lost block, rounded
// half-up and clamped to [0,255].
template <class Scalar>
PlaneU8 cut_patch(const FseModel<Scalar>& model, const ExtrapolationVolume<Scalar>& volume) {
    const PlaneT<Scalar> block = model.g[volume.center_plane].block(
        volume.block_y, volume.block_x, volume.block_size, volume.block_size);
    return detail::round_patch(block);
}

// Replays the chosen coefficients on the lost block only: element nu is
// the patch the model would produce after nu iterations. Element 0 is the
// all-zero model.
template <class Scalar>
std::vector<PlaneU8> per_iteration_patches(const FseModel<Scalar>& model,
                                           const ExtrapolationVolume<Scalar>& volume,
                                           const FseConfig& cfg) {
    const GridDims dims = cfg.grid();
    const auto twm = detail::twiddle_table<Scalar>(dims.m);
    const auto twn = detail::twiddle_table<Scalar>(dims.n);
    const auto twp = detail::twiddle_table<Scalar>(dims.p);
    using Complex = std::complex<Scalar>;

    PlaneT<Scalar> acc = PlaneT<Scalar>::Zero(volume.block_size, volume.block_size);
    std::vector<PlaneU8> patches;
    patches.reserve(model.chosen.size() + 1);
    patches.push_back(detail::round_patch(acc));

    const int pc = volume.center_plane;
    for (const FseChoice<Scalar>& choice : model.chosen) {
        int um, un, up;
        dims.split(choice.bin, um, un, up);
        const bool self = dims.mirror(choice.bin) == choice.bin;
        const auto ep = twp[(static_cast<long>(up) * pc) % dims.p];
        for (int n = 0; n < volume.block_size; ++n) {
            const auto en = twn[(static_cast<long>(un) * (volume.block_y + n)) % dims.n];
            for (int m = 0; m < volume.block_size; ++m) {
                const Complex phase = std::conj(
                    twm[(static_cast<long>(um) * (volume.block_x + m)) % dims.m] * en * ep);
                acc(n, m) += self ? (choice.coeff * phase).real()
                                  : 2 * (choice.coeff * phase).real();
            }
        }
        patches.push_back(detail::round_patch(acc));
    }
    return patches;
}

}  // namespace mcfse
