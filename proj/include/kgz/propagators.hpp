#pragma once

// Closed-form Fourier-space solutions of the free wave and free Klein-Gordon
// equations, and the unimodular half-wave phases e^{+-it|xi|}, e^{+-it<xi>}.

#include <utility>

#include "kgz/spectral.hpp"

namespace kgz {

/// Cauchy data (u, d_t u) at time t0, held in frequency space. The physical
/// samples are kept as well; the continuum phase evaluator transforms them.
struct FreeWaveData {
  Spectrum n0_hat;
  Spectrum n1_hat;
  RealField n0;
  RealField n1;
  double t0 = 1.0;

  static FreeWaveData from_fields(const RealField& n0, const RealField& n1, double t0 = 1.0);
  static FreeWaveData from_spectra(const Spectrum& n0_hat, const Spectrum& n1_hat, double t0 = 1.0);

  const SpectralGrid& grid() const { return n0_hat.grid(); }
  /// \int n1 dx = n1^(0).
  double moment() const { return n1_hat.zero_mode().real(); }
};

/// Spectra (u^, d_t u^) of the free wave at time t.
std::pair<Spectrum, Spectrum> free_wave_spectra(const FreeWaveData& data, double t);
/// Physical fields (l, d_t l) of the free wave at time t.
std::pair<RealField, RealField> free_wave_evolve(const FreeWaveData& data, double t);

/// Closed-form free wave coefficient at a single frequency of magnitude r:
/// returns (l^, d_t l^) given n0^, n1^ at that frequency.
std::pair<cplx, cplx> free_wave_mode(cplx n0, cplx n1, double r, double elapsed);

/// Free Klein-Gordon (mass 1) flow of data given at t0.
std::pair<Spectrum, Spectrum> free_kg_spectra(const Spectrum& v0_hat, const Spectrum& v1_hat,
                                              double t0, double t);
std::pair<RealField, RealField> free_kg_evolve(const FreeWaveData& data, double t);

/// Multiplies by e^{sign i t |xi|} (mass 0) or e^{sign i t <xi>} (mass 1).
Spectrum half_phase(const Spectrum& s, int sign, double t, int mass);

/// Time-independent g^_+ = n1^ - i|xi| n0^.
Spectrum g_profile(const FreeWaveData& data);

}  // namespace kgz
