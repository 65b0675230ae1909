#pragma once

#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

/// Open interval (a, b) with a < b.
struct Interval {
  double a = -1.0;
  double b = 1.0;

  Interval() = default;
  Interval(double lo, double hi) : a(lo), b(hi) {
    if (!(lo < hi)) {
      throw DomainError("interval requires a < b, got (" + std::to_string(lo) +
                        ", " + std::to_string(hi) + ")");
    }
  }

  double length() const noexcept { return b - a; }
  double midpoint() const noexcept { return 0.5 * (a + b); }
  bool contains(double x) const noexcept { return a < x && x < b; }

  /// Affine pullback x -> 2(x-a)/(b-a) - 1 onto [-1, 1].
  double to_reference(double x) const noexcept {
    return 2.0 * (x - a) / (b - a) - 1.0;
  }
  double from_reference(double t) const noexcept {
    return midpoint() + 0.5 * (b - a) * t;
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace fraclap
