#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "tcflow/operators.hpp"

namespace tcflow {

/// Runs f(row) for row in [0, n), as an OpenMP loop or serially.
template <class F>
void for_rows(Exec exec, int n, F&& f) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (int row = 0; row < n; ++row) f(row);
    } else {
        for (int row = 0; row < n; ++row) f(row);
    }
}

/// Ordered sum of per-row partials; independent of the thread count.
inline double ordered_sum(const std::vector<double>& partials) {
    return std::accumulate(partials.begin(), partials.end(), 0.0);
}

inline double ordered_max(const std::vector<double>& partials) {
    return partials.empty() ? 0.0 : *std::max_element(partials.begin(), partials.end());
}

}  // namespace tcflow
