#pragma once

// Experiment configuration: sectioned key = value text with '#' comments.
// Every error carries the file name and line.

#include <string>

#include "kgz/evolution.hpp"
#include "kgz/scattering.hpp"

namespace kgz {

struct ExperimentConfig {
  std::string experiment;  // smoke, decay, identity-audits, cascade, dichotomy, theta-growth
  std::string output;      // default artifact directory (the CLI's --out wins)
  std::string origin;      // file the config came from

  // [grid]
  double L = 48.0;
  int N = 256;
  double dealias = 2.0 / 3.0;

  // [data]
  InitialDataParams data;

  // [time]
  double t_end = 40.0;
  double dt = 0.1;
  double snapshot_every = 1.0;
  int snapshot_stride = 0;  // binary snapshot every k-th emitted state; 0 = none

  // [analysis]
  double p = 0.75;
  double p1 = 0.1;
  double delta = 0.1;
  double c_e = 0.1;   // defaults to delta
  double d_e = -0.1;  // defaults to -delta
  int k_lo = -4, k_hi = 0;
  int xi_count = 8;
  double xi_max = 4.0;
  double xi_radius = 2.0;  // dichotomy: frequency disc carrying the phase correction
  double ds = 0.0125;
  double log_step = 0.004;
  int gl_nodes = 48;
  ThetaEvaluator evaluator = ThetaEvaluator::Lattice;
  ThetaNormalization normalization = ThetaNormalization::Consistent;
  int m_lo = 1, m_hi = 4;
  double fit_from = 32.0;
  double fit_lo = 256.0, fit_hi = 4096.0;
  double ratio_threshold = 0.8;

  SpectralGrid grid() const { return SpectralGrid(L, N, dealias); }
  ThetaOptions theta_options() const;
  EvolveParams evolve_params() const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::string& path);

}  // namespace kgz
