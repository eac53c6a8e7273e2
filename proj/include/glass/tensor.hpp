#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace glass {

// Generic dense float tensor, rank 2 to 4, row-major with the last dimension
// fastest. This is the on-disk unit; the typed wrappers below add meaning.
struct Tensor {
    std::vector<std::uint32_t> dims;
    std::vector<float> data;

    std::size_t rank() const { return dims.size(); }
    std::size_t element_count() const;
};

// Per-pixel feature vectors on an h x w grid, d channels, channel-fastest.
struct FeatureMap {
    int h = 0;
    int w = 0;
    int d = 0;
    std::vector<float> data;

    FeatureMap() = default;
    FeatureMap(int h_, int w_, int d_);

    std::span<const float> at(int y, int x) const {
        return {data.data() + (static_cast<std::size_t>(y) * w + x) * d,
                static_cast<std::size_t>(d)};
    }
    std::span<float> at(int y, int x) {
        return {data.data() + (static_cast<std::size_t>(y) * w + x) * d,
                static_cast<std::size_t>(d)};
    }

    Tensor to_tensor() const;
    // Validates rank 3 and finite values; throws ShapeError / InputError.
    static FeatureMap from_tensor(const Tensor& t, const std::string& what);
};

// Per-pixel class probability vectors. Construction checks that every pixel
// sums to 1 within kSumTolerance and that no entry is negative.
struct SegMap {
    int h = 0;
    int w = 0;
    int c = 0;
    std::vector<float> data;

    static constexpr float kSumTolerance = 1e-4f;

    SegMap() = default;
    // Does not validate; call validate() once the payload is filled in.
    SegMap(int h_, int w_, int c_);

    std::span<const float> at(int y, int x) const {
        return {data.data() + (static_cast<std::size_t>(y) * w + x) * c,
                static_cast<std::size_t>(c)};
    }
    std::span<float> at(int y, int x) {
        return {data.data() + (static_cast<std::size_t>(y) * w + x) * c,
                static_cast<std::size_t>(c)};
    }

    // Throws InputError naming the first offending pixel.
    void validate(const std::string& what) const;

    Tensor to_tensor() const;
    static SegMap from_tensor(const Tensor& t, const std::string& what);
};

// Dense 0/1 grid shared by confidence maps, out-of-bounds masks, similarity
// masks and ignore masks.
struct BinaryMask {
    int h = 0;
    int w = 0;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int h_, int w_) : h(h_), w(w_), bits(static_cast<std::size_t>(h_) * w_, 0) {}

    std::uint8_t at(int y, int x) const { return bits[static_cast<std::size_t>(y) * w + x]; }
    void set(int y, int x, std::uint8_t v) { bits[static_cast<std::size_t>(y) * w + x] = v; }
    std::size_t count_ones() const;

    Tensor to_tensor() const;
    static BinaryMask from_tensor(const Tensor& t, const std::string& what);
};

// Integer class labels per pixel for supervised cross entropy.
// kIgnoreLabel marks pixels excluded from the mean.
struct LabelMap {
    static constexpr std::int32_t kIgnoreLabel = 255;

    int h = 0;
    int w = 0;
    std::vector<std::int32_t> labels;

    LabelMap() = default;
    LabelMap(int h_, int w_)
        : h(h_), w(w_), labels(static_cast<std::size_t>(h_) * w_, kIgnoreLabel) {}

    std::int32_t at(int y, int x) const { return labels[static_cast<std::size_t>(y) * w + x]; }
    void set(int y, int x, std::int32_t v) { labels[static_cast<std::size_t>(y) * w + x] = v; }

    Tensor to_tensor() const;
    // Rank-2 tensor of integral values in [0, 255]; anything else is rejected.
    static LabelMap from_tensor(const Tensor& t, const std::string& what);
};

} // namespace glass
