#include "intlab/common.hpp"

#include <charconv>

namespace intlab {

namespace {

std::string shortest(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

std::string format_complex(cplx z) {
    if (z.imag() == 0.0) return shortest(z.real());
    std::string im = shortest(std::abs(z.imag())) + "i";
    if (z.real() == 0.0) return (z.imag() < 0 ? "-" : "") + im;
    return shortest(z.real()) + (z.imag() < 0 ? "-" : "+") + im;
}

cplx param_or(const Params& p, const std::string& key, cplx fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

cplx param(const Params& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw UsageError("missing parameter '" + key + "'");
    return it->second;
}

}  // namespace intlab
