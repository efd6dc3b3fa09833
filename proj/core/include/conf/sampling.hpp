#pragma once

#include "conf/signature.hpp"

#include <cstddef>
#include <vector>

namespace conf {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
  double mid() const noexcept { return 0.5 * (lo + hi); }
};

using Box = std::vector<Interval>;

/// Halton point `index` (starting at 1) in the unit cube of dimension `dim`.
Vec halton(std::size_t index, int dim);

/// `k` evenly spaced points covering [lo, hi] inclusive (k == 1 gives the
/// midpoint).
std::vector<double> linspace(double lo, double hi, int k);

/// Interior sample set for a box: the box is shrunk by `margin` (fraction of
/// each side's width) at both ends, then covered by a tensor grid with
/// `per_axis` points per coordinate, followed by `quasi_random` Halton points
/// of the shrunk box. Order is fixed: grid in row-major order, then Halton.
std::vector<Vec> sample_box(const Box& box, int per_axis, double margin = 0.01,
                            std::size_t quasi_random = 32);

}  // namespace conf
