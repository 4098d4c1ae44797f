#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>

namespace intlab {

using cplx = std::complex<double>;

// Named complex constants attached to fields and equations.
using Params = std::map<std::string, cplx>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mathematically undefined input: log(0), non-analytic jet lift, bad modulus.
class DomainError : public Error {
public:
    using Error::Error;
};

// A jet division or declared locus hit a (near) pole; the caller resamples.
class SingularPoint : public DomainError {
public:
    SingularPoint(const std::string& what, cplx x, cplx t)
        : DomainError(what), x(x), t(t) {}
    cplx x, t;
};

// Iterative algorithm (AGM, series, quadrature) failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Bad flags, unknown names, malformed config. Maps to exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

std::string format_complex(cplx z);
cplx param_or(const Params& p, const std::string& key, cplx fallback);
cplx param(const Params& p, const std::string& key);

}  // namespace intlab
