#pragma once

#include <unsupported/Eigen/FFT>

#include <complex>
#include <stdexcept>
#include <vector>

namespace mcfse {

// Frequency grid of an M x N x P transform. Bins are linearized with m
// fastest: index = m + M*(n + N*p); the same layout is used for sample
// grids, so a volume plane occupies a contiguous slab per p.
struct GridDims {
    int m = 0;
    int n = 0;
    int p = 0;

    long total() const { return static_cast<long>(m) * n * p; }

    long index(int km, int kn, int kp) const {
        return km + static_cast<long>(m) * (kn + static_cast<long>(n) * kp);
    }

    void split(long idx, int& km, int& kn, int& kp) const {
        km = static_cast<int>(idx % m);
        kn = static_cast<int>((idx / m) % n);
        kp = static_cast<int>(idx / (static_cast<long>(m) * n));
    }

    // conjugate-symmetric partner: component-wise negation mod dims
    long mirror(long idx) const {
        int km, kn, kp;
        split(idx, km, kn, kp);
        return index(km == 0 ? 0 : m - km, kn == 0 ? 0 : n - kn, kp == 0 ? 0 : p - kp);
    }
};

// In-place 3D complex FFT, one axis at a time. Plans are cached per axis
// length inside the Eigen FFT object, so an instance can be reused across
// many transforms of the same grid.
template <class Scalar>
class Fft3 {
public:
    using Complex = std::complex<Scalar>;

    explicit Fft3(GridDims dims) : dims_(dims) {
        if (dims.m <= 0 || dims.n <= 0 || dims.p <= 0) {
            throw std::runtime_error("FFT grid dimensions must be positive");
        }
        const int longest = std::max(dims.m, std::max(dims.n, dims.p));
        line_in_.resize(longest);
        line_out_.resize(longest);
    }

    const GridDims& dims() const { return dims_; }

    void forward(std::vector<Complex>& grid) { transform(grid, false); }

    // includes the 1/(M*N*P) scaling
    void inverse(std::vector<Complex>& grid) { transform(grid, true); }

private:
    void transform(std::vector<Complex>& grid, bool inverse_dir) {
        if (static_cast<long>(grid.size()) != dims_.total()) {
            throw std::runtime_error("grid size does not match FFT dimensions");
        }
        transform_axis(grid, dims_.m, 1, inverse_dir);
        transform_axis(grid, dims_.n, dims_.m, inverse_dir);
        transform_axis(grid, dims_.p, static_cast<long>(dims_.m) * dims_.n, inverse_dir);
    }

    void transform_axis(std::vector<Complex>& grid, int len, long stride, bool inverse_dir) {
        const long total = dims_.total();
        const long lines = total / len;
        for (long line = 0; line < lines; ++line) {
            // enumerate line starts: positions whose axis coordinate is 0
            const long block = line / stride;
            const long within = line % stride;
            const long start = block * stride * len + within;

            for (int j = 0; j < len; ++j) line_in_[j] = grid[start + j * stride];
            if (inverse_dir) {
                fft_.inv(line_out_.data(), line_in_.data(), len);
            } else {
                fft_.fwd(line_out_.data(), line_in_.data(), len);
            }
            for (int j = 0; j < len; ++j) grid[start + j * stride] = line_out_[j];
        }
    }

    GridDims dims_;
    Eigen::FFT<Scalar> fft_;
    std::vector<Complex> line_in_, line_out_;
};

}  // namespace mcfse
