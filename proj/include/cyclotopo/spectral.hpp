#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "cyclotopo/network.hpp"
#include "cyclotopo/signal.hpp"

namespace cyclotopo {

enum class Window { hann, rect };

struct WelchParams {
  std::size_t segment_length = 32;
  double overlap = 0.5;
  Window window = Window::hann;
  /// Keep every stride-th FFT bin.
  std::size_t stride = 1;
};

/// Per-frequency mT x mT matrices for m nodes with lifted period T.
struct SpectralGrid {
  std::vector<double> omegas;
  int period = 1;
  std::vector<NodeId> nodes;
  std::vector<Eigen::MatrixXcd> matrices;
  /// Welch effective number of averaged segments; 0 marks an exact grid.
  double effective_segments = 0.0;

  std::size_t size() const { return omegas.size(); }
  bool is_exact() const { return effective_segments <= 0.0; }
  std::size_t index_of(NodeId id) const;
  /// T x T block with rows from `row` and columns from `col`.
  Eigen::MatrixXcd block(std::size_t f, NodeId row, NodeId col) const;
  /// Grid over a subset of the nodes, in the given order.
  SpectralGrid restrict(const std::vector<NodeId>& keep) const;
};

/// 2 pi f / L for f = 0, stride, 2 stride, ...
std::vector<double> fft_grid(std::size_t segment_length, std::size_t stride = 1);
std::vector<double> window_taps(Window w, std::size_t length);
/// Segment count, and the count corrected for overlap correlation.
std::size_t welch_segments(std::size_t samples, const WelchParams& params);
double welch_effective_segments(std::size_t samples, const WelchParams& params);

/// Averaged windowed cross-periodogram on the FFT grid, using
/// Phi_xy(omega) = sum_tau E[x(k + tau) y(k)^*] e^{-i omega tau}.
std::vector<Complex> welch_cross_psd(const std::vector<Complex>& x, const std::vector<Complex>& y,
                                     const WelchParams& params);

/// Blocked PSD of lifted series (one per node, equal period and length).
SpectralGrid estimate_block_psd(const std::vector<LiftedSeries>& series, const WelchParams& params);

/// Per-frequency inverse of (Phi + ridge I). Negative eigenvalues are
/// clipped; an ill-conditioned matrix gets an automatic ridge and a warning.
SpectralGrid invert_psd(const SpectralGrid& grid, double ridge = 0.0, std::vector<std::string>* warnings = nullptr);

/// Exact lifted PSD (I - H)^-1 Phi_E (I - H)^-*. Period 0 means the network
/// period.
SpectralGrid exact_psd(const NetworkSpec& net, const std::vector<double>& omegas, int period = 0);
/// Exact (I - H)^* Phi_E^-1 (I - H).
SpectralGrid exact_inverse_psd(const NetworkSpec& net, const std::vector<double>& omegas, int period = 0);

struct LatentBlocks {
  Eigen::MatrixXcd J_oo, J_oh, J_ho, J_hh;
  Eigen::MatrixXcd Gamma, Delta, Sigma, Lambda, Psi;
  /// J_oo - J_oh J_hh^-1 J_ho.
  Eigen::MatrixXcd observed_inverse;
};

/// Exact decomposition of the observed inverse PSD into the observed-only,
/// hidden-child and hidden-parent terms.
struct OracleComponents {
  std::vector<double> omegas;
  int period = 1;
  std::vector<NodeId> observed;
  std::vector<NodeId> hidden;
  std::vector<LatentBlocks> blocks;

  /// Observed inverse PSD as a spectral grid.
  SpectralGrid observed_inverse_grid() const;
  /// Largest relative deviation of J_oo - J_oh J_hh^-1 J_ho from
  /// Gamma + Delta + Sigma and from the inverse of the observed PSD block.
  double identity_error(const NetworkSpec& net) const;
};

OracleComponents exact_latent_components(const NetworkSpec& net, const std::vector<double>& omegas, int period = 0);

/// Rows (omega, i, j, p, t, re, im) for every block of every matrix.
void write_spectral_dump(std::ostream& os, const SpectralGrid& grid, const std::vector<std::string>& comments = {});

/// Max over frequencies of the max-abs entry of block (a, b).
double block_norm(const SpectralGrid& grid, NodeId a, NodeId b);

}  // namespace cyclotopo
