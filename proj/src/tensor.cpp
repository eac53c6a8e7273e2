#include "glass/tensor.hpp"

#include <cmath>
#include <string>

#include "glass/errors.hpp"

namespace glass {

namespace {

void check_positive_dims(std::size_t count, const std::string& what) {
    if (count == 0) throw ShapeError(what + ": empty tensor");
}

std::uint32_t dim_u32(int v, const std::string& what) {
    if (v <= 0) throw ShapeError(what + ": non-positive dimension");
    return static_cast<std::uint32_t>(v);
}

int dim_int(std::uint32_t v, const std::string& what) {
    if (v > 0x7fffffffu) throw ShapeError(what + ": dimension too large");
    return static_cast<int>(v);
}

} // namespace

std::size_t Tensor::element_count() const {
    std::size_t n = 1;
    for (std::uint32_t d : dims) n *= d;
    return dims.empty() ? 0 : n;
}

FeatureMap::FeatureMap(int h_, int w_, int d_) : h(h_), w(w_), d(d_) {
    dim_u32(h_, "FeatureMap");
    dim_u32(w_, "FeatureMap");
    dim_u32(d_, "FeatureMap");
    data.assign(static_cast<std::size_t>(h_) * w_ * d_, 0.0f);
}

Tensor FeatureMap::to_tensor() const {
    return {{dim_u32(h, "FeatureMap"), dim_u32(w, "FeatureMap"), dim_u32(d, "FeatureMap")},
            data};
}

FeatureMap FeatureMap::from_tensor(const Tensor& t, const std::string& what) {
    if (t.rank() != 3) {
        throw ShapeError(what + ": expected a rank-3 feature tensor, got rank " +
                         std::to_string(t.rank()));
    }
    FeatureMap f;
    f.h = dim_int(t.dims[0], what);
    f.w = dim_int(t.dims[1], what);
    f.d = dim_int(t.dims[2], what);
    f.data = t.data;
    return f;
}

SegMap::SegMap(int h_, int w_, int c_) : h(h_), w(w_), c(c_) {
    dim_u32(h_, "SegMap");
    dim_u32(w_, "SegMap");
    dim_u32(c_, "SegMap");
    data.assign(static_cast<std::size_t>(h_) * w_ * c_, 0.0f);
}

void SegMap::validate(const std::string& what) const {
    check_positive_dims(data.size(), what);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto px = at(y, x);
            double sum = 0.0;
            for (float v : px) {
                if (!(v >= 0.0f)) {  // catches negatives and NaN
                    throw InputError(what + ": negative or non-finite probability at pixel (" +
                                     std::to_string(x) + "," + std::to_string(y) + ")");
                }
                sum += v;
            }
            if (std::abs(sum - 1.0) > kSumTolerance) {
                throw InputError(what + ": probabilities at pixel (" + std::to_string(x) + "," +
                                 std::to_string(y) + ") sum to " + std::to_string(sum));
            }
        }
    }
}

Tensor SegMap::to_tensor() const {
    return {{dim_u32(h, "SegMap"), dim_u32(w, "SegMap"), dim_u32(c, "SegMap")}, data};
}

SegMap SegMap::from_tensor(const Tensor& t, const std::string& what) {
    if (t.rank() != 3) {
        throw ShapeError(what + ": expected a rank-3 probability tensor, got rank " +
                         std::to_string(t.rank()));
    }
    SegMap s;
    s.h = dim_int(t.dims[0], what);
    s.w = dim_int(t.dims[1], what);
    s.c = dim_int(t.dims[2], what);
    s.data = t.data;
    s.validate(what);
    return s;
}

std::size_t BinaryMask::count_ones() const {
    std::size_t n = 0;
    for (std::uint8_t b : bits) n += b ? 1 : 0;
    return n;
}

Tensor BinaryMask::to_tensor() const {
    Tensor t{{dim_u32(h, "mask"), dim_u32(w, "mask")}, {}};
    t.data.reserve(bits.size());
    for (std::uint8_t b : bits) t.data.push_back(b ? 1.0f : 0.0f);
    return t;
}

BinaryMask BinaryMask::from_tensor(const Tensor& t, const std::string& what) {
    if (t.rank() != 2) {
        throw ShapeError(what + ": expected a rank-2 mask tensor, got rank " +
                         std::to_string(t.rank()));
    }
    BinaryMask m(dim_int(t.dims[0], what), dim_int(t.dims[1], what));
    for (std::size_t i = 0; i < t.data.size(); ++i) {
        const float v = t.data[i];
        if (v != 0.0f && v != 1.0f) {
            throw InputError(what + ": mask value is neither 0 nor 1");
        }
        m.bits[i] = v != 0.0f ? 1 : 0;
    }
    return m;
}

Tensor LabelMap::to_tensor() const {
    Tensor t{{dim_u32(h, "labels"), dim_u32(w, "labels")}, {}};
    t.data.reserve(labels.size());
    for (std::int32_t v : labels) t.data.push_back(static_cast<float>(v));
    return t;
}

LabelMap LabelMap::from_tensor(const Tensor& t, const std::string& what) {
    if (t.rank() != 2) {
        throw ShapeError(what + ": expected a rank-2 label tensor, got rank " +
                         std::to_string(t.rank()));
    }
    LabelMap m(dim_int(t.dims[0], what), dim_int(t.dims[1], what));
    for (std::size_t i = 0; i < t.data.size(); ++i) {
        const float v = t.data[i];
        if (v != std::floor(v) || v < 0.0f || v > 255.0f) {
            throw InputError(what + ": label values must be integers in [0, 255]");
        }
        m.labels[i] = static_cast<std::int32_t>(v);
    }
    return m;
}

} // namespace glass
