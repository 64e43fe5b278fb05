#pragma once

#include <array>

#include "kgz/spectral.hpp"

namespace kgz {

/// Unknowns (n, d_t n, E, d_t E) at one time; E has two real components.
struct FieldState {
  double t = 1.0;
  RealField n;
  RealField nt;
  std::array<RealField, 2> E;
  std::array<RealField, 2> Et;

  FieldState() = default;
  explicit FieldState(const SpectralGrid& g, double time = 1.0)
      : t(time), n(g), nt(g), E{RealField(g), RealField(g)}, Et{RealField(g), RealField(g)} {}

  const SpectralGrid& grid() const { return n.grid; }
  bool finite() const;
  /// Largest absolute sample over all six planes.
  double max_abs() const;
};

}  // namespace kgz
