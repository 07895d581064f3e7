// Coordinate boxes: per-axis fractions (b'_j, b''_j] of the scale P.
#pragma once

#include <utility>
#include <vector>

#include "circle/common.hpp"

namespace circle {

struct BoxSpec {
    // One (lo, hi) fraction pair per coordinate, 0 <= lo < hi <= 1.
    std::vector<std::pair<double, double>> sides;

    static BoxSpec unit(int n) {
        BoxSpec b;
        b.sides.assign(n, {0.0, 1.0});
        return b;
    }
    int dim() const { return static_cast<int>(sides.size()); }
    double volume() const {
        double v = 1.0;
        for (auto& [lo, hi] : sides) v *= hi - lo;
        return v;
    }
    void validate() const {
        if (sides.empty()) throw input_error("BoxSpec: empty box");
        for (auto& [lo, hi] : sides)
            if (!(0.0 <= lo && lo < hi && hi <= 1.0))
                throw input_error("BoxSpec: need 0 <= lo < hi <= 1 per side");
    }
};

// Integer range of the scaled side (lo*P, hi*P]: returns {first, last}
// (empty when first > last).  A 1e-9 guard absorbs binary-fraction noise so
// e.g. 0.3 * 10 lands on 3, matching the open-closed convention exactly.
inline std::pair<long long, long long> scaled_range(double lo, double hi,
                                                    long long P) {
    auto lo_floor = static_cast<long long>(std::floor(lo * P + 1e-9));
    auto hi_floor = static_cast<long long>(std::floor(hi * P + 1e-9));
    return {lo_floor + 1, hi_floor};
}

}  // namespace circle
