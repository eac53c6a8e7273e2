#include "glass/confidence.hpp"

#include <string>

#include "glass/errors.hpp"
#include "glass/losses.hpp"

namespace glass {

ConfidenceMap confidence_map(const SegMap& a, const SegMap& b, const BinaryMask& oob) {
    if (a.h != b.h || a.w != b.w || a.c != b.c) {
        throw ShapeError("confidence_map: label maps disagree in shape");
    }
    if (oob.h != a.h || oob.w != a.w) {
        throw ShapeError("confidence_map: mask grid differs from the label grid");
    }

    // Precompute both argmax grids; the neighbourhood scan then only touches
    // small integers.
    std::vector<int> cls_a(static_cast<std::size_t>(a.h) * a.w);
    std::vector<int> cls_b(cls_a.size());
    for (int y = 0; y < a.h; ++y) {
        for (int x = 0; x < a.w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * a.w + x;
            cls_a[i] = argmax_class(a.at(y, x));
            cls_b[i] = argmax_class(b.at(y, x));
        }
    }

    ConfidenceMap m(a.h, a.w);
    for (int y = 0; y < a.h; ++y) {
        for (int x = 0; x < a.w; ++x) {
            if (oob.at(y, x)) continue;  // stays 0 regardless of agreement
            const int want = cls_a[static_cast<std::size_t>(y) * a.w + x];
            bool found = false;
            for (int dy = -1; dy <= 1 && !found; ++dy) {
                const int ny = y + dy;
                if (ny < 0 || ny >= a.h) continue;
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx;
                    if (nx < 0 || nx >= a.w) continue;
                    if (cls_b[static_cast<std::size_t>(ny) * a.w + nx] == want) {
                        found = true;
                        break;
                    }
                }
            }
            if (found) m.set(y, x, 1);
        }
    }
    return m;
}

double zero_fraction(const ConfidenceMap& m) {
    if (m.bits.empty()) throw InputError("zero_fraction: empty map");
    const std::size_t zeros = m.bits.size() - m.count_ones();
    return static_cast<double>(zeros) / static_cast<double>(m.bits.size());
}

} // namespace glass
