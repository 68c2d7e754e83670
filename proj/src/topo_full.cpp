#include "cyclotopo/topo_full.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "cyclotopo/error.hpp"

namespace cyclotopo {

namespace {

void append_double(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "nan";
    return;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

// Rotation fit and chi-square style residual against e^{i theta} * Hermitian.
void fit_residual(const SpectralGrid& g, NodeId j, NodeId i, PhaseProfile& prof) {
  const Eigen::Index T = g.period;
  const Eigen::Index jb = static_cast<Eigen::Index>(g.index_of(j)) * T;
  const Eigen::Index ib = static_cast<Eigen::Index>(g.index_of(i)) * T;
  const double K = g.effective_segments;

  struct Term {
    Complex a, b;
    double expected;
  };
  std::vector<Term> terms;
  for (std::size_t f = 0; f < g.size(); ++f) {
    const auto& P = g.matrices[f];
    for (Eigen::Index r = 0; r < T; ++r)
      for (Eigen::Index s = r; s < T; ++s) {
        double v_rs = P(jb + r, jb + r).real() * P(ib + s, ib + s).real() / K;
        double v_sr = P(jb + s, jb + s).real() * P(ib + r, ib + r).real() / K;
        double expected = r == s ? v_rs / 2.0 : (v_rs + v_sr) / 4.0;
        terms.push_back({P(jb + r, ib + s), P(jb + s, ib + r), std::max(expected, 1e-300)});
      }
  }
  Complex S = 0.0;
  for (const auto& t : terms) S += t.a * t.b / t.expected;
  double theta = 0.5 * std::arg(S);
  double trace = 0.0;
  for (std::size_t f = 0; f < g.size(); ++f)
    for (Eigen::Index r = 0; r < T; ++r) trace += (std::polar(1.0, -theta) * g.matrices[f](jb + r, ib + r)).real();
  if (trace < 0.0) theta += std::numbers::pi;
  theta = std::remainder(theta, 2.0 * std::numbers::pi);

  double sum = 0.0;
  Complex rot = std::polar(1.0, -theta);
  for (const auto& t : terms) sum += std::norm(rot * t.a - std::conj(rot) * std::conj(t.b)) / 4.0 / t.expected;
  prof.residual = terms.size() > 1 ? sum / static_cast<double>(terms.size() - 1) : 0.0;
  prof.residual_phase = theta;
}

}  // namespace

PhaseProfile phase_profile(const SpectralGrid& inverse, NodeId j, NodeId i, double magnitude_floor) {
  PhaseProfile prof;
  prof.j = j;
  prof.i = i;
  double peak = 0.0;
  for (std::size_t f = 0; f < inverse.size(); ++f) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(inverse.block(f, j, i), false);
    std::vector<Complex> ev(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
    for (auto v : ev) peak = std::max(peak, std::abs(v));
    prof.eigenvalues.push_back(std::move(ev));
  }
  Complex sum = 0.0;
  double weight = 0.0;
  double floor = magnitude_floor * peak;
  for (const auto& ev : prof.eigenvalues)
    for (auto v : ev) {
      if (std::abs(v) < floor || std::abs(v) == 0.0) continue;
      sum += v;
      weight += std::abs(v);
      ++prof.pooled;
    }
  if (prof.pooled == 0 || weight == 0.0) {
    prof.degenerate = true;
    prof.flatness = 0.0;
    prof.mean_phase = 0.0;
  } else {
    double R = std::min(1.0, std::abs(sum) / weight);
    prof.flatness = R > 0.0 ? std::sqrt(-2.0 * std::log(R)) : std::numeric_limits<double>::infinity();
    prof.mean_phase = std::arg(sum);
  }
  if (inverse.is_exact())
    prof.residual = std::numeric_limits<double>::quiet_NaN();
  else
    fit_residual(inverse, j, i, prof);
  return prof;
}

bool is_phase_constant(const PhaseProfile& profile, bool exact_grid, const PhaseConfig& config) {
  if (profile.degenerate) return true;
  PhaseStatistic stat = config.statistic;
  if (stat == PhaseStatistic::automatic) stat = exact_grid ? PhaseStatistic::flatness : PhaseStatistic::residual;
  if (stat == PhaseStatistic::residual) {
    if (std::isnan(profile.residual)) throw InputError("residual statistic needs an estimated grid");
    return profile.residual < config.residual_tol;
  }
  return profile.flatness < config.flatness_tol;
}

TopologyGraph moral_graph(const SpectralGrid& inverse, double rho) {
  TopologyGraph g(NodeSet(inverse.nodes.begin(), inverse.nodes.end()));
  for (std::size_t a = 0; a < inverse.nodes.size(); ++a)
    for (std::size_t b = a + 1; b < inverse.nodes.size(); ++b)
      if (block_norm(inverse, inverse.nodes[a], inverse.nodes[b]) > rho) g.add_edge(inverse.nodes[a], inverse.nodes[b]);
  return g;
}

TopologyGraph prune_spurious(const TopologyGraph& moral, const SpectralGrid& inverse, const PhaseConfig& config,
                             std::vector<EdgeDiagnostic>* diagnostics, std::vector<std::string>* warnings) {
  TopologyGraph out = moral;
  std::vector<NodeId> ids(inverse.nodes.begin(), inverse.nodes.end());
  std::sort(ids.begin(), ids.end());
  for (std::size_t x = 0; x < ids.size(); ++x)
    for (std::size_t y = x + 1; y < ids.size(); ++y) {
      NodeId j = ids[x], i = ids[y];
      bool in_moral = moral.has_node(j) && moral.has_node(i) && moral.has_edge(j, i);
      if (!in_moral && !diagnostics) continue;
      EdgeDiagnostic d;
      d.j = j;
      d.i = i;
      d.block_norm = block_norm(inverse, j, i);
      d.profile = phase_profile(inverse, j, i, config.magnitude_floor);
      if (!in_moral) {
        d.decision = "absent";
      } else if (is_phase_constant(d.profile, inverse.is_exact(), config)) {
        d.decision = "spurious";
        out.remove_edge(j, i);
        if (d.profile.degenerate && warnings)
          warnings->push_back("edge (" + std::to_string(j) + "," + std::to_string(i) +
                              ") has a degenerate phase profile; treated as spurious");
      } else {
        d.decision = "kept";
      }
      if (diagnostics) diagnostics->push_back(std::move(d));
    }
  return out;
}

LearnConfig LearnConfig::oracle_defaults() {
  LearnConfig c;
  c.rho = 1e-6;
  c.phase.flatness_tol = 1e-6;
  return c;
}

int choose_period(const std::vector<ScalarSeries>& series, const LearnConfig& config, std::vector<int>* node_periods) {
  if (config.period) {
    if (*config.period < 1) throw InputError("period must be at least 1");
    if (node_periods) node_periods->assign(series.size(), *config.period);
    return *config.period;
  }
  std::vector<int> periods;
  for (const auto& s : series) periods.push_back(detect_period(s, config.max_period, config.period_threshold));
  if (node_periods) *node_periods = periods;
  return periods.empty() ? 1 : lcm_periods(periods);
}

SpectralGrid estimate_inverse(const std::vector<ScalarSeries>& series, int period, const LearnConfig& config,
                              std::vector<std::string>* warnings) {
  if (series.empty()) throw InputError("no series given");
  for (const auto& s : series) {
    if (s.size() != series.front().size()) throw InputError("series differ in length");
    s.validate();
  }
  std::vector<LiftedSeries> lifted;
  for (const auto& s : series) lifted.push_back(lift(s, period));
  SpectralGrid psd = estimate_block_psd(lifted, config.welch);
  return invert_psd(psd, config.ridge, warnings);
}

FullResult reconstruct_from_inverse(const SpectralGrid& inverse, const LearnConfig& config) {
  FullResult r;
  r.period = inverse.period;
  r.moral = moral_graph(inverse, config.rho);
  r.topology = prune_spurious(r.moral, inverse, config.phase, &r.diagnostics, &r.warnings);
  r.inverse = inverse;
  return r;
}

FullResult reconstruct_topology(const std::vector<ScalarSeries>& series, const LearnConfig& config) {
  if (series.empty()) throw InputError("no series given");
  std::vector<int> node_periods;
  int T = choose_period(series, config, &node_periods);
  std::vector<std::string> warnings;
  SpectralGrid inv = estimate_inverse(series, T, config, &warnings);
  FullResult r = reconstruct_from_inverse(inv, config);
  r.node_periods = node_periods;
  r.warnings.insert(r.warnings.begin(), warnings.begin(), warnings.end());
  return r;
}

FullResult reconstruct_topology_oracle(const NetworkSpec& net, const LearnConfig& config) {
  int T = config.period.value_or(net.period());
  SpectralGrid inv = exact_inverse_psd(net, fft_grid(config.oracle_grid, config.welch.stride), T);
  FullResult r = reconstruct_from_inverse(inv, config);
  for (NodeId id : net.nodes()) r.node_periods.push_back(net.periods().at(id));
  return r;
}

void write_diagnostics_csv(std::ostream& os, const std::vector<EdgeDiagnostic>& diagnostics,
                           const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "j,i,block_norm,flatness,mean_phase,decision,residual\n";
  std::string line;
  for (const auto& d : diagnostics) {
    line = std::to_string(d.j) + ',' + std::to_string(d.i) + ',';
    append_double(line, d.block_norm);
    line += ',';
    append_double(line, d.profile.flatness);
    line += ',';
    append_double(line, d.profile.mean_phase);
    line += ',' + d.decision + ',';
    append_double(line, d.profile.residual);
    line += '\n';
    os << line;
  }
}

}  // namespace cyclotopo
