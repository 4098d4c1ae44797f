#include "intlab/sampling.hpp"

namespace intlab {

namespace {

double radical_inverse(std::size_t i, unsigned base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * double(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

}  // namespace

std::pair<double, double> halton(std::size_t index) {
    return {radical_inverse(index, 2), radical_inverse(index, 3)};
}

}  // namespace intlab
