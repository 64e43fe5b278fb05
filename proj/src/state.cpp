#include "kgz/state.hpp"

#include <algorithm>

namespace kgz {

namespace {
template <typename Fn>
void each_plane(const FieldState& s, Fn&& fn) {
  fn(s.n);
  fn(s.nt);
  for (int c = 0; c < 2; ++c) {
    fn(s.E[c]);
    fn(s.Et[c]);
  }
}
}  // namespace

bool FieldState::finite() const {
  bool ok = std::isfinite(t);
  each_plane(*this, [&](const RealField& f) {
    for (double v : f.values)
      if (!std::isfinite(v)) ok = false;
  });
  return ok;
}

double FieldState::max_abs() const {
  double m = 0.0;
  each_plane(*this, [&](const RealField& f) {
    for (double v : f.values) m = std::max(m, std::abs(v));
  });
  return m;
}

}  // namespace kgz
