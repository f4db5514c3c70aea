#include <cmath>
#include <limits>
#include <stdexcept>

#include "mmrx/equalizer.hpp"

namespace mmrx::equalizer {

namespace {

double level(std::uint8_t b_sign, std::uint8_t b_amp) {
    const double s = 1.0 - 2.0 * b_sign;
    return s * (2.0 - (1.0 - 2.0 * b_amp));
}

}  // namespace

std::vector<cplx> qam16_map(std::span<const std::uint8_t> bits, double scale) {
    if (bits.size() % 4 != 0) throw std::invalid_argument("qam16_map: bit count must be a multiple of 4");
    std::vector<cplx> out(bits.size() / 4);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto* b = bits.data() + 4 * i;
        if ((b[0] | b[1] | b[2] | b[3]) > 1) throw std::invalid_argument("qam16_map: bits must be 0 or 1");
        out[i] = {level(b[0], b[2]) * scale, level(b[1], b[3]) * scale};
    }
    return out;
}

std::vector<std::uint8_t> demap_qam16(std::span<const cplx> x, double scale) {
    std::vector<std::uint8_t> out(4 * x.size());
    const double t = 2.0 * scale;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double re = x[i].real(), im = x[i].imag();
        out[4 * i + 0] = re < 0.0;
        out[4 * i + 1] = im < 0.0;
        out[4 * i + 2] = std::fabs(re) > t;
        out[4 * i + 3] = std::fabs(im) > t;
    }
    return out;
}

double qam16_bound() {
    return std::nextafter(3.0 * kQam16Scale, std::numeric_limits<double>::infinity());
}

}  // namespace mmrx::equalizer
