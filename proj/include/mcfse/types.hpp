#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace mcfse {

// Image planes are row-major so that plane(y, x) maps directly onto the
// byte order of raw video files.
template <class Scalar>
using PlaneT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using PlaneU8 = PlaneT<std::uint8_t>;
using PlaneBool = PlaneT<bool>;
using PlaneD = PlaneT<double>;

// Ordered luma frames of an 8-bit video sequence. Chroma is never
// processed; writers synthesize or splice it as needed.
struct Sequence {
    int width = 0;
    int height = 0;
    int fps_num = 30;
    int fps_den = 1;
    std::vector<PlaneU8> luma;

    int frame_count() const { return static_cast<int>(luma.size()); }

    bool same_geometry(const Sequence& other) const {
        return width == other.width && height == other.height &&
               frame_count() == other.frame_count();
    }
};

inline bool operator==(const Sequence& a, const Sequence& b) {
    if (!a.same_geometry(b)) return false;
    for (int t = 0; t < a.frame_count(); ++t) {
        if (!(a.luma[t] == b.luma[t]).all()) return false;
    }
    return true;
}

inline bool operator!=(const Sequence& a, const Sequence& b) { return !(a == b); }

// Per-frame availability maps. true = sample usable as support.
using AvailabilityMaps = std::vector<PlaneBool>;

inline bool in_frame(int x, int y, int width, int height) {
    return x >= 0 && y >= 0 && x < width && y < height;
}

}  // namespace mcfse
