#include "dhtrng/rng.hpp"

#include <cmath>
#include <cstdlib>

namespace dhtrng {

namespace {

// Marsaglia & Tsang (2000) normal ziggurat, 128 layers over 2^31 grid.
struct ZigguratTables {
    uint32_t kn[128];
    double wn[128];
    double fn[128];

    ZigguratTables() {
        const double m1 = 2147483648.0;
        const double vn = 9.91256303526217e-3;
        double dn = 3.442619855899;
        double tn = dn;
        double q = vn / std::exp(-0.5 * dn * dn);
        kn[0] = static_cast<uint32_t>((dn / q) * m1);
        kn[1] = 0;
        wn[0] = q / m1;
        wn[127] = dn / m1;
        fn[0] = 1.0;
        fn[127] = std::exp(-0.5 * dn * dn);
        for (int i = 126; i >= 1; --i) {
            dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
            kn[i + 1] = static_cast<uint32_t>((dn / tn) * m1);
            tn = dn;
            fn[i] = std::exp(-0.5 * dn * dn);
            wn[i] = dn / m1;
        }
    }
};

const ZigguratTables& zig() {
    static const ZigguratTables tables;
    return tables;
}

}  // namespace

double NoiseRng::next_gaussian() {
    const ZigguratTables& t = zig();
    const double r = 3.442619855899;
    for (;;) {
        const int32_t hz = static_cast<int32_t>(next_u32());
        const uint32_t iz = static_cast<uint32_t>(hz) & 127u;
        const uint32_t mag =
            hz < 0 ? static_cast<uint32_t>(-static_cast<int64_t>(hz)) : static_cast<uint32_t>(hz);
        if (mag < t.kn[iz]) return hz * t.wn[iz];
        if (iz == 0) {
            // Tail beyond the base strip.
            double x, y;
            do {
                x = -std::log(next_unit()) / r;
                y = -std::log(next_unit());
            } while (y + y < x * x);
            return hz > 0 ? r + x : -(r + x);
        }
        const double x = hz * t.wn[iz];
        if (t.fn[iz] + next_unit() * (t.fn[iz - 1] - t.fn[iz]) < std::exp(-0.5 * x * x)) {
            return x;
        }
    }
}

}  // namespace dhtrng
