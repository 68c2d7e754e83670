#include "cyclotopo/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "cyclotopo/error.hpp"

namespace cyclotopo {

InputSpec InputSpec::white(double variance, Distribution d) {
  InputSpec s;
  s.variance = variance;
  s.distribution = d;
  return s;
}

InputSpec InputSpec::am_white(std::vector<Complex> modulation, double variance, Distribution d) {
  InputSpec s;
  s.kind = InputKind::am_white;
  s.period = static_cast<int>(modulation.size());
  s.modulation = std::move(modulation);
  s.variance = variance;
  s.distribution = d;
  return s;
}

void InputSpec::validate() const {
  if (!(variance > 0.0) || !std::isfinite(variance)) throw InputError("input variance must be positive");
  if (period < 1) throw InputError("input period must be at least 1");
  if (kind == InputKind::white) {
    if (period != 1 && static_cast<int>(modulation.size()) != period)
      throw InputError("white input must have period 1");
  } else {
    if (static_cast<int>(modulation.size()) != period)
      throw InputError("modulation length must equal the input period");
    if (std::all_of(modulation.begin(), modulation.end(), [](Complex c) { return c == Complex(0.0); }))
      throw InputError("modulation is identically zero");
  }
  if (shaping) {
    shaping->validate();
    if (!shaping->is_stable()) throw InputError("input shaping filter is unstable");
  }
}

Complex InputSpec::amplitude(std::int64_t k) const {
  if (kind == InputKind::white || modulation.empty()) return 1.0;
  std::int64_t T = static_cast<std::int64_t>(modulation.size());
  return modulation[static_cast<std::size_t>(((k % T) + T) % T)];
}

Eigen::MatrixXcd InputSpec::lifted_psd(int block_period, double omega) const {
  int p_in = kind == InputKind::white ? 1 : period;
  if (block_period % p_in != 0) {
    // unshaped white input with constant |s| is WSS at every block period
    bool flat = !shaping && std::all_of(modulation.begin(), modulation.end(), [&](Complex c) {
      return std::abs(std::norm(c) - std::norm(modulation.front())) <= 1e-14 * std::norm(modulation.front());
    });
    if (flat)
      return variance * std::norm(modulation.front()) * Eigen::MatrixXcd::Identity(block_period, block_period);
    throw InputError("block period " + std::to_string(block_period) + " is not a multiple of input period " +
                     std::to_string(p_in));
  }
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(block_period, block_period);
  for (int p = 0; p < block_period; ++p) s(p, p) = amplitude(p);
  if (!shaping) return variance * s * s.adjoint();
  Eigen::MatrixXcd g = lifted_transfer_block(*shaping, block_period, omega);
  return variance * s * g * g.adjoint() * s.adjoint();
}

void NetworkSpec::add_node(NodeId id, InputSpec input) {
  if (index_.contains(id)) throw InputError("duplicate node " + std::to_string(id));
  index_[id] = nodes_.size();
  nodes_.push_back(id);
  inputs_[id] = std::move(input);
}

void NetworkSpec::add_edge(NodeId from, NodeId to, FilterSpec filter) {
  if (from == to) throw InputError("self-loop filter on node " + std::to_string(from));
  if (!has_node(from)) throw InputError("edge from unknown node " + std::to_string(from));
  if (!has_node(to)) throw InputError("edge to unknown node " + std::to_string(to));
  filter.validate();
  impulse_cache_.erase({to, from});
  if (filter.is_zero()) {
    filters_.erase({to, from});
    return;
  }
  filters_[{to, from}] = std::move(filter);
}

void NetworkSpec::set_hidden(NodeSet hidden) {
  for (NodeId h : hidden)
    if (!has_node(h)) throw InputError("hidden node " + std::to_string(h) + " is not in the network");
  hidden_ = std::move(hidden);
}

std::size_t NetworkSpec::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown node " + std::to_string(id));
  return it->second;
}

const FilterSpec* NetworkSpec::filter(NodeId to, NodeId from) const {
  auto it = filters_.find({to, from});
  return it == filters_.end() ? nullptr : &it->second;
}

std::vector<NodeId> NetworkSpec::observed() const {
  std::vector<NodeId> out;
  for (NodeId id : nodes_)
    if (!hidden_.contains(id)) out.push_back(id);
  return out;
}

DirectedGraph NetworkSpec::directed_graph() const {
  DirectedGraph g(NodeSet(nodes_.begin(), nodes_.end()));
  for (const auto& [key, f] : filters_) g.add_arc(key.second, key.first);
  return g;
}

TopologyGraph NetworkSpec::topology() const {
  TopologyGraph g = topology_of(directed_graph());
  for (NodeId h : hidden_) g.set_label(h, NodeLabel::hidden);
  return g;
}

std::map<NodeId, int> NetworkSpec::periods() const {
  std::map<NodeId, int> out;
  for (const auto& [id, in] : inputs_) out[id] = in.kind == InputKind::white ? 1 : in.period;
  return out;
}

int NetworkSpec::period() const {
  std::vector<int> ps{1};
  for (auto [id, p] : periods()) ps.push_back(p);
  return lcm_periods(ps);
}

int NetworkSpec::observed_period() const {
  std::vector<int> ps{1};
  for (auto [id, p] : periods())
    if (!hidden_.contains(id)) ps.push_back(p);
  return lcm_periods(ps);
}

const std::vector<Complex>& NetworkSpec::impulse(NodeId to, NodeId from) const {
  auto it = impulse_cache_.find({to, from});
  if (it != impulse_cache_.end()) return it->second;
  return impulse_cache_.emplace(std::make_pair(to, from), filters_.at({to, from}).impulse_response()).first->second;
}

Eigen::MatrixXcd NetworkSpec::lifted_transfer(int block_period, double omega) const {
  const Eigen::Index T = block_period;
  const Eigen::Index m = static_cast<Eigen::Index>(nodes_.size());
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m * T, m * T);
  for (const auto& [key, f] : filters_) {
    Eigen::Index i = static_cast<Eigen::Index>(index_of(key.first));
    Eigen::Index j = static_cast<Eigen::Index>(index_of(key.second));
    H.block(i * T, j * T, T, T) = lifted_transfer_block(impulse(key.first, key.second), block_period, omega);
  }
  return H;
}

Eigen::MatrixXcd NetworkSpec::lifted_input_psd(int block_period, double omega) const {
  const Eigen::Index T = block_period;
  const Eigen::Index m = static_cast<Eigen::Index>(nodes_.size());
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(m * T, m * T);
  for (Eigen::Index i = 0; i < m; ++i) P.block(i * T, i * T, T, T) = inputs_.at(nodes_[i]).lifted_psd(block_period, omega);
  return P;
}

Eigen::MatrixXcd NetworkSpec::lag0_matrix() const {
  const Eigen::Index m = static_cast<Eigen::Index>(nodes_.size());
  Eigen::MatrixXcd H0 = Eigen::MatrixXcd::Zero(m, m);
  for (const auto& [key, f] : filters_)
    H0(static_cast<Eigen::Index>(index_of(key.first)), static_cast<Eigen::Index>(index_of(key.second))) = f.lag0();
  return H0;
}

double NetworkSpec::min_singular_value(int block_period, const std::vector<double>& omegas) const {
  double smallest = std::numeric_limits<double>::infinity();
  const Eigen::Index n = static_cast<Eigen::Index>(nodes_.size()) * block_period;
  for (double w : omegas) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) - lifted_transfer(block_period, w);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    smallest = std::min(smallest, svd.singularValues()(n - 1));
  }
  return smallest;
}

void NetworkSpec::validate(std::size_t grid_points) const {
  if (nodes_.empty()) throw InputError("network has no nodes");
  for (const auto& [id, in] : inputs_) {
    try {
      in.validate();
    } catch (const InputError& e) {
      throw InputError("node " + std::to_string(id) + ": " + e.what());
    }
  }
  for (const auto& [key, f] : filters_) {
    if (!f.is_stable())
      throw InputError("filter h_" + std::to_string(key.first) + "," + std::to_string(key.second) + " is unstable");
  }
  // a pure feedthrough loop must be solvable at every step
  const Eigen::Index m = static_cast<Eigen::Index>(nodes_.size());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd0(Eigen::MatrixXcd::Identity(m, m) - lag0_matrix());
  if (svd0.singularValues()(m - 1) <= 1e-6) throw InputError("network is ill-posed: I - H0 is singular");
  std::vector<double> omegas(grid_points);
  for (std::size_t f = 0; f < grid_points; ++f)
    omegas[f] = 2.0 * std::numbers::pi * static_cast<double>(f) / static_cast<double>(grid_points);
  double s = min_singular_value(period(), omegas);
  if (!(s > 1e-6)) throw InputError("network is ill-posed: min singular value of I - H is " + std::to_string(s));
}

FilterSpec tustin_inverse_dynamics(const std::vector<Complex>& coefficients, double dt) {
  if (!(dt > 0.0)) throw InputError("sampling period must be positive");
  if (coefficients.empty() || coefficients.back() == Complex(0.0))
    throw InputError("leading continuous coefficient must be nonzero");
  const std::size_t l = coefficients.size() - 1;
  const std::vector<Complex> minus{1.0, -1.0};
  const std::vector<Complex> plus{1.0, 1.0};
  auto power = [](const std::vector<Complex>& base, std::size_t n) {
    std::vector<Complex> out{1.0};
    for (std::size_t k = 0; k < n; ++k) out = poly_multiply(out, base);
    return out;
  };
  std::vector<Complex> den(l + 1, 0.0);
  for (std::size_t n = 0; n <= l; ++n) {
    Complex scale = coefficients[n] * std::pow(2.0 / dt, static_cast<double>(n));
    auto term = poly_multiply(power(minus, n), power(plus, l - n));
    for (std::size_t k = 0; k < term.size(); ++k) den[k] += scale * term[k];
  }
  return FilterSpec::rational(power(plus, l), den);
}

NetworkSpec tustin(const ContinuousModelSpec& cm) {
  NetworkSpec net;
  std::map<NodeId, FilterSpec> inv;
  for (NodeId id : cm.nodes) {
    auto it = cm.coefficients.find(id);
    if (it == cm.coefficients.end()) throw InputError("node " + std::to_string(id) + " has no dynamics");
    FilterSpec g = tustin_inverse_dynamics(it->second, cm.dt);
    if (!g.is_stable()) throw NumericalError("node " + std::to_string(id) + ": discretized dynamics are unstable");
    inv[id] = g;
    InputSpec in = cm.inputs.contains(id) ? cm.inputs.at(id) : InputSpec::white();
    in.shaping = in.shaping ? (*in.shaping) * g : g;
    net.add_node(id, in);
  }
  for (const auto& [key, b] : cm.couplings) {
    if (b == Complex(0.0)) continue;
    if (!inv.contains(key.first) || !inv.contains(key.second))
      throw InputError("coupling between unknown nodes " + std::to_string(key.first) + "," + std::to_string(key.second));
    FilterSpec h = inv.at(key.first);
    for (auto& c : h.numerator) c *= b;
    net.add_edge(key.second, key.first, h);
  }
  net.set_hidden(cm.hidden);
  return net;
}

}  // namespace cyclotopo
