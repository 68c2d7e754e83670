#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cyclotopo/graph.hpp"
#include "cyclotopo/network.hpp"
#include "cyclotopo/spectral.hpp"

namespace cyclotopo {

enum class PhaseStatistic {
  /// flatness on exact grids, residual on estimated grids
  automatic,
  flatness,
  residual,
};

struct PhaseConfig {
  PhaseStatistic statistic = PhaseStatistic::automatic;
  double flatness_tol = 0.1;
  double residual_tol = 4.0;
  double magnitude_floor = 0.05;
};

/// Eigenvalue phases of one inverse-PSD block across the grid.
struct PhaseProfile {
  NodeId j = 0;
  NodeId i = 0;
  /// Per frequency, the T eigenvalues of block (j, i).
  std::vector<std::vector<Complex>> eigenvalues;
  /// Magnitude-weighted circular standard deviation of the pooled phases.
  double flatness = 0.0;
  /// Circular mean of the pooled phases.
  double mean_phase = 0.0;
  /// Noise-normalized distance from e^{i theta} * Hermitian, about 1 for a
  /// constant-phase block. NaN on exact grids.
  double residual = 0.0;
  /// Best rotation theta of the residual fit.
  double residual_phase = 0.0;
  std::size_t pooled = 0;
  bool degenerate = false;
};

PhaseProfile phase_profile(const SpectralGrid& inverse, NodeId j, NodeId i, double magnitude_floor = 0.05);
/// True when the profile indicates a constant phase under `config`.
bool is_phase_constant(const PhaseProfile& profile, bool exact_grid, const PhaseConfig& config);

/// Edge (a, b) iff block_norm(a, b) > rho.
TopologyGraph moral_graph(const SpectralGrid& inverse, double rho);

struct EdgeDiagnostic {
  NodeId j = 0;
  NodeId i = 0;
  double block_norm = 0.0;
  PhaseProfile profile;
  /// "kept", "spurious" or "absent".
  std::string decision;
};

TopologyGraph prune_spurious(const TopologyGraph& moral, const SpectralGrid& inverse, const PhaseConfig& config,
                             std::vector<EdgeDiagnostic>* diagnostics = nullptr,
                             std::vector<std::string>* warnings = nullptr);

struct LearnConfig {
  /// Forced lifting period; detected from the data when unset.
  std::optional<int> period;
  int max_period = 8;
  double period_threshold = 10.0;
  WelchParams welch;
  double ridge = 0.0;
  /// Block-norm threshold for the moral graph or the observed-node graph.
  double rho = 0.03;
  PhaseConfig phase;
  /// Frequencies for oracle runs (FFT grid of this length).
  std::size_t oracle_grid = 64;

  /// Thresholds for exact spectra.
  static LearnConfig oracle_defaults();
};

struct FullResult {
  TopologyGraph moral;
  TopologyGraph topology;
  int period = 1;
  std::vector<int> node_periods;
  /// All node pairs, ordered by (min, max).
  std::vector<EdgeDiagnostic> diagnostics;
  std::vector<std::string> warnings;
  SpectralGrid inverse;
};

/// Period detection and lifting shared by both learners.
int choose_period(const std::vector<ScalarSeries>& series, const LearnConfig& config, std::vector<int>* node_periods);
SpectralGrid estimate_inverse(const std::vector<ScalarSeries>& series, int period, const LearnConfig& config,
                              std::vector<std::string>* warnings);

FullResult reconstruct_from_inverse(const SpectralGrid& inverse, const LearnConfig& config);
FullResult reconstruct_topology(const std::vector<ScalarSeries>& series, const LearnConfig& config);
/// Same pipeline on the exact inverse PSD of `net`.
FullResult reconstruct_topology_oracle(const NetworkSpec& net, const LearnConfig& config);

/// Columns j,i,block_norm,flatness,mean_phase,decision,residual.
void write_diagnostics_csv(std::ostream& os, const std::vector<EdgeDiagnostic>& diagnostics,
                           const std::vector<std::string>& comments = {});

}  // namespace cyclotopo
