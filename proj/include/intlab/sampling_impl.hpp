#pragma once

#include <algorithm>
#include <future>
#include <thread>

#include "intlab/sampling.hpp"

namespace intlab {

template <class T>
std::vector<std::pair<Point, T>> sample_admissible(const Region& r, std::size_t count,
                                                   const std::function<std::optional<T>(const Point&)>& probe) {
    std::vector<std::pair<Point, T>> out;
    const std::size_t budget = 20 * std::max<std::size_t>(count, 1);
    const std::size_t batch = std::max<std::size_t>(count, 8);
    const std::size_t workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    std::size_t next = 0;
    while (out.size() < count && next < budget) {
        std::size_t n = std::min(batch, budget - next);
        std::vector<Point> pts(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto [a, b] = halton(kHaltonOffset + next + i);
            pts[i] = Point{r.x0 + a * (r.x1 - r.x0), r.t0 + b * (r.t1 - r.t0), 0.0};
        }
        std::vector<std::optional<T>> res(n);
        // Strided partition: results land by index, so order is deterministic.
        std::vector<std::future<void>> jobs;
        for (std::size_t w = 0; w < workers; ++w)
            jobs.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t i = w; i < n; i += workers) res[i] = probe(pts[i]);
            }));
        for (auto& j : jobs) j.get();
        for (std::size_t i = 0; i < n && out.size() < count; ++i)
            if (res[i]) out.emplace_back(pts[i], std::move(*res[i]));
        next += n;
    }
    if (2 * out.size() < count)
        throw DomainError("region too singular: " + std::to_string(out.size()) + " admissible points of " +
                          std::to_string(count) + " requested");
    return out;
}

}  // namespace intlab
