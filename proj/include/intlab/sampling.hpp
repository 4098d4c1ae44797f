#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "intlab/jet.hpp"

namespace intlab {

struct Region {
    double x0 = -1, x1 = 1, t0 = 0, t1 = 1;
};

// Radical-inverse Halton point in [0,1)^2, bases 2 and 3.
std::pair<double, double> halton(std::size_t index);

// Index offset so that the first points avoid the corners of the box.
constexpr std::size_t kHaltonOffset = 17;

// Deterministic scan: candidates are Halton points mapped into the region,
// evaluated in parallel batches and accepted in index order. `probe` returns
// nullopt for inadmissible points. Throws DomainError when fewer than
// ceil(count/2) points are admissible after 20*count candidates.
template <class T>
std::vector<std::pair<Point, T>> sample_admissible(const Region& r, std::size_t count,
                                                   const std::function<std::optional<T>(const Point&)>& probe);

}  // namespace intlab

#include "intlab/sampling_impl.hpp"
