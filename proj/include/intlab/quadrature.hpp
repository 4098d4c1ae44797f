#pragma once

#include <functional>
#include <vector>

#include "intlab/common.hpp"

namespace intlab::quad {

using VecFn = std::function<std::vector<cplx>(cplx)>;

struct Result {
    std::vector<cplx> value;
    double error = 0.0;
    int evaluations = 0;
};

// Adaptive G7K15 on the straight segment a -> b for a vector-valued
// integrand. Throws ConvergenceError when the interval budget runs out.
Result gauss_kronrod(const VecFn& f, cplx a, cplx b, double rel_tol = 1e-12, double abs_tol = 1e-14,
                     int max_intervals = 2000);

cplx gauss_kronrod(const std::function<cplx(cplx)>& f, cplx a, cplx b, double rel_tol = 1e-12,
                   double abs_tol = 1e-14);

}  // namespace intlab::quad
