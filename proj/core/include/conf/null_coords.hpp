#pragma once

namespace conf {

/// Point of 2D Minkowski space in Cartesian coordinates.
struct Event2 {
  double x = 0.0;
  double t = 0.0;
  friend bool operator==(const Event2&, const Event2&) = default;
};

/// The same point in null coordinates u = x + t, v = x - t.
struct Null2 {
  double u = 0.0;
  double v = 0.0;
  friend bool operator==(const Null2&, const Null2&) = default;
};

constexpr Null2 to_null(Event2 p) noexcept { return {p.x + p.t, p.x - p.t}; }

constexpr Event2 from_null(Null2 q) noexcept { return {0.5 * (q.u + q.v), 0.5 * (q.u - q.v)}; }

}  // namespace conf
