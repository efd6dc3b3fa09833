#include "conf/sampling.hpp"

#include "conf/error.hpp"

#include <array>
#include <cmath>

namespace conf {

namespace {

constexpr std::array<int, 12> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(std::size_t i, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

Vec halton(std::size_t index, int dim) {
  if (dim < 1 || dim > static_cast<int>(kPrimes.size()))
    throw Error(ErrorKind::InvalidArgument, "halton dimension out of range");
  Vec p(dim);
  for (int d = 0; d < dim; ++d) p[d] = radical_inverse(index, kPrimes[d]);
  return p;
}

std::vector<double> linspace(double lo, double hi, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "linspace needs at least one point");
  if (k == 1) return {0.5 * (lo + hi)};
  std::vector<double> xs(k);
  for (int i = 0; i < k; ++i) xs[i] = lo + (hi - lo) * static_cast<double>(i) / (k - 1);
  xs.back() = hi;
  return xs;
}

std::vector<Vec> sample_box(const Box& box, int per_axis, double margin, std::size_t quasi_random) {
  const int n = static_cast<int>(box.size());
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty sampling box");
  Box inner;
  for (const auto& iv : box) {
    if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo < iv.hi))
      throw Error(ErrorKind::InvalidArgument, "sampling interval must be finite with lo < hi");
    const double pad = margin * iv.width();
    inner.push_back({iv.lo + pad, iv.hi - pad});
  }

  std::vector<std::vector<double>> axes;
  for (const auto& iv : inner) axes.push_back(linspace(iv.lo, iv.hi, per_axis));

  std::vector<Vec> out;
  std::vector<int> idx(n, 0);
  for (;;) {
    Vec p(n);
    for (int d = 0; d < n; ++d) p[d] = axes[d][idx[d]];
    out.push_back(std::move(p));
    int d = n - 1;
    while (d >= 0 && ++idx[d] == per_axis) idx[d--] = 0;
    if (d < 0) break;
  }
  for (std::size_t i = 1; i <= quasi_random; ++i) {
    Vec h = halton(i, n);
    for (int d = 0; d < n; ++d) h[d] = inner[d].lo + inner[d].width() * h[d];
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace conf
