#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cyclotopo/filter.hpp"
#include "cyclotopo/graph.hpp"
#include "cyclotopo/signal.hpp"

namespace cyclotopo {

enum class InputKind { white, am_white };
enum class Distribution { gaussian_real, gaussian_circular_complex };

/// Exogenous input e(k) = s(k mod T_i) * u(k), u = shaping * w, w white.
struct InputSpec {
  InputKind kind = InputKind::white;
  int period = 1;
  std::vector<Complex> modulation{Complex(1.0)};
  double variance = 1.0;
  Distribution distribution = Distribution::gaussian_circular_complex;
  /// Optional coloring filter applied to w before modulation.
  std::optional<FilterSpec> shaping;

  static InputSpec white(double variance = 1.0, Distribution d = Distribution::gaussian_circular_complex);
  static InputSpec am_white(std::vector<Complex> modulation, double variance = 1.0,
                            Distribution d = Distribution::gaussian_circular_complex);

  void validate() const;
  Complex amplitude(std::int64_t k) const;
  /// T x T lifted PSD of the input block process; T must be a multiple of
  /// the input period.
  Eigen::MatrixXcd lifted_psd(int block_period, double omega) const;
};

/// Linear dynamical model x_i = sum_j h_ij * x_j + e_i.
class NetworkSpec {
 public:
  NetworkSpec() = default;

  void add_node(NodeId id, InputSpec input = InputSpec::white());
  /// x_to receives filter * x_from. Zero filters are dropped.
  void add_edge(NodeId from, NodeId to, FilterSpec filter);
  void set_hidden(NodeSet hidden);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t index_of(NodeId id) const;
  bool has_node(NodeId id) const { return index_.contains(id); }
  const InputSpec& input(NodeId id) const { return inputs_.at(id); }
  InputSpec& input(NodeId id) { return inputs_.at(id); }
  /// Keyed by (to, from), i.e. (i, j) for h_ij.
  const std::map<std::pair<NodeId, NodeId>, FilterSpec>& filters() const { return filters_; }
  const FilterSpec* filter(NodeId to, NodeId from) const;
  const NodeSet& hidden() const { return hidden_; }
  std::vector<NodeId> observed() const;

  DirectedGraph directed_graph() const;
  TopologyGraph topology() const;
  std::map<NodeId, int> periods() const;
  /// LCM of all input periods.
  int period() const;
  int observed_period() const;

  /// Lifted network matrix, block (i, j) = lifted h_ij.
  Eigen::MatrixXcd lifted_transfer(int block_period, double omega) const;
  /// Block-diagonal lifted input PSD.
  Eigen::MatrixXcd lifted_input_psd(int block_period, double omega) const;
  /// Lag-0 tap matrix in node order.
  Eigen::MatrixXcd lag0_matrix() const;

  /// Checks every filter and input, stability of rational edges, and
  /// well-posedness on `grid_points` frequencies.
  void validate(std::size_t grid_points = 64) const;
  /// Smallest singular value of I - H(omega) over the grid.
  double min_singular_value(int block_period, const std::vector<double>& omegas) const;

 private:
  std::vector<NodeId> nodes_;
  std::map<NodeId, std::size_t> index_;
  std::map<NodeId, InputSpec> inputs_;
  std::map<std::pair<NodeId, NodeId>, FilterSpec> filters_;
  NodeSet hidden_;
  mutable std::map<std::pair<NodeId, NodeId>, std::vector<Complex>> impulse_cache_;

  const std::vector<Complex>& impulse(NodeId to, NodeId from) const;
};

/// Continuous-time model: S_i(d/dt) x_i = sum_j b_ij x_j + p_i, sampled at dt.
struct ContinuousModelSpec {
  std::vector<NodeId> nodes;
  /// a_{n,i}, n = 0..l.
  std::map<NodeId, std::vector<Complex>> coefficients;
  /// b_ij keyed by (i, j).
  std::map<std::pair<NodeId, NodeId>, Complex> couplings;
  std::map<NodeId, InputSpec> inputs;
  NodeSet hidden;
  double dt = 1.0;
};

/// Discrete numerator/denominator of 1/S(z) under the bilinear substitution
/// s = 2(1 - z^-1) / (dt (1 + z^-1)).
FilterSpec tustin_inverse_dynamics(const std::vector<Complex>& coefficients, double dt);
/// h_ij = b_ij / S_i(z); the node input becomes p_i / S_i(z). Throws
/// NumericalError naming the node when 1/S_i is unstable.
NetworkSpec tustin(const ContinuousModelSpec& cm);

/// One exogenous input realization. k is measured from `origin`, so index
/// `origin` uses modulation phase 0.
ScalarSeries gen_input(const InputSpec& spec, std::size_t samples, std::uint64_t seed, NodeId node = 0,
                       std::size_t origin = 0);

struct SimulationOptions {
  std::size_t samples = 0;
  std::size_t burn_in = 10000;
  std::uint64_t seed = 0;
  /// Include hidden nodes in the output.
  bool full_output = false;
};

std::vector<ScalarSeries> simulate(const NetworkSpec& net, const SimulationOptions& options);
/// Runs the recursion from zero state on recorded inputs (one per node, in
/// node order). Returns every node.
std::vector<ScalarSeries> simulate_with_inputs(const NetworkSpec& net, const std::vector<ScalarSeries>& inputs);

/// Seed of the input generator for one node.
std::uint64_t node_seed(std::uint64_t seed, NodeId node);

}  // namespace cyclotopo
