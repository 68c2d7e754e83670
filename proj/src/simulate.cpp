#include <cmath>
#include <random>

#include "cyclotopo/error.hpp"
#include "cyclotopo/network.hpp"

namespace cyclotopo {

namespace {

constexpr double kDivergence = 1e12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Direct-form recursion of one rational filter with a(0) normalized to 1.
class Recursion {
 public:
  explicit Recursion(const FilterSpec& f) {
    Complex a0 = f.denominator.front();
    for (auto c : f.numerator) b_.push_back(c / a0);
    for (std::size_t n = 1; n < f.denominator.size(); ++n) a_.push_back(f.denominator[n] / a0);
    xin_.assign(b_.size(), 0.0);
    yout_.assign(a_.size() + 1, 0.0);
  }

  Complex lag0() const { return b_.front(); }

  // Contribution of strictly past samples.
  Complex past() const {
    Complex acc = 0.0;
    for (std::size_t n = 1; n < b_.size(); ++n) acc += b_[n] * xin_[(head_x_ + b_.size() + 1 - n) % b_.size()];
    for (std::size_t n = 0; n < a_.size(); ++n) acc -= a_[n] * yout_[(head_y_ + yout_.size() - 1 - n) % yout_.size()];
    return acc;
  }

  // Commits the current input sample and the output it produced.
  void push(Complex x, Complex y) {
    head_x_ = (head_x_ + 1) % b_.size();
    xin_[head_x_] = x;
    yout_[head_y_] = y;
    head_y_ = (head_y_ + 1) % yout_.size();
  }

 private:
  std::vector<Complex> b_, a_;
  std::vector<Complex> xin_, yout_;
  std::size_t head_x_ = 0;
  std::size_t head_y_ = 0;
};

class InputGenerator {
 public:
  InputGenerator(const InputSpec& spec, std::uint64_t seed, std::size_t origin)
      : spec_(spec), rng_(seed), origin_(static_cast<std::int64_t>(origin)) {
    if (spec.shaping) shaping_.emplace(*spec.shaping);
  }

  Complex next() {
    Complex w;
    if (spec_.distribution == Distribution::gaussian_real) {
      w = std::sqrt(spec_.variance) * normal_(rng_);
    } else {
      double s = std::sqrt(spec_.variance / 2.0);
      double re = normal_(rng_);
      double im = normal_(rng_);
      w = Complex(s * re, s * im);
    }
    if (shaping_) {
      Complex u = shaping_->lag0() * w + shaping_->past();
      shaping_->push(w, u);
      w = u;
    }
    return spec_.amplitude(index_++ - origin_) * w;
  }

 private:
  const InputSpec& spec_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  std::optional<Recursion> shaping_;
  std::int64_t origin_;
  std::int64_t index_ = 0;
};

struct Edge {
  std::size_t to;
  std::size_t from;
  Recursion rec;
};

// Shared recursion; `input(i, k)` yields e_i(k).
template <class Source>
std::vector<ScalarSeries> run(const NetworkSpec& net, std::size_t total, std::size_t skip, Source&& input) {
  const std::size_t m = net.node_count();
  std::vector<Edge> edges;
  for (const auto& [key, f] : net.filters()) edges.push_back({net.index_of(key.first), net.index_of(key.second), Recursion(f)});

  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  Eigen::MatrixXcd A = I - net.lag0_matrix();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
  if (!lu.isInvertible()) throw NumericalError("lag-0 coupling I - H0 is singular");
  Eigen::MatrixXcd solve = lu.inverse();
  bool coupled = !net.lag0_matrix().isZero(0.0);

  std::vector<ScalarSeries> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[i].node_id = net.nodes()[i];
    out[i].samples.reserve(total - skip);
  }
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(m));
  Eigen::VectorXcd x(static_cast<Eigen::Index>(m));
  std::vector<Complex> past(edges.size());

  for (std::size_t k = 0; k < total; ++k) {
    for (std::size_t i = 0; i < m; ++i) rhs(static_cast<Eigen::Index>(i)) = input(i, k);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      past[e] = edges[e].rec.past();
      rhs(static_cast<Eigen::Index>(edges[e].to)) += past[e];
    }
    if (coupled)
      x.noalias() = solve * rhs;
    else
      x = rhs;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      Complex xj = x(static_cast<Eigen::Index>(edges[e].from));
      edges[e].rec.push(xj, edges[e].rec.lag0() * xj + past[e]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      Complex v = x(static_cast<Eigen::Index>(i));
      if (!(std::abs(v) <= kDivergence))
        throw NumericalError("simulation diverged at node " + std::to_string(net.nodes()[i]) + " (step " +
                             std::to_string(k) + ")");
      if (k >= skip) out[i].samples.push_back(v);
    }
  }
  return out;
}

}  // namespace

std::uint64_t node_seed(std::uint64_t seed, NodeId node) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(node)));
}

ScalarSeries gen_input(const InputSpec& spec, std::size_t samples, std::uint64_t seed, NodeId node,
                       std::size_t origin) {
  spec.validate();
  InputGenerator gen(spec, seed, origin);
  ScalarSeries s{node, {}};
  s.samples.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) s.samples.push_back(gen.next());
  return s;
}

std::vector<ScalarSeries> simulate(const NetworkSpec& net, const SimulationOptions& options) {
  if (options.samples == 0) throw InputError("sample count must be positive");
  net.validate();
  std::vector<InputGenerator> gens;
  gens.reserve(net.node_count());
  for (NodeId id : net.nodes()) gens.emplace_back(net.input(id), node_seed(options.seed, id), options.burn_in);
  auto all = run(net, options.burn_in + options.samples, options.burn_in, [&](std::size_t i, std::size_t) { return gens[i].next(); });
  if (options.full_output) return all;
  std::vector<ScalarSeries> observed;
  for (auto& s : all)
    if (!net.hidden().contains(s.node_id)) observed.push_back(std::move(s));
  return observed;
}

std::vector<ScalarSeries> simulate_with_inputs(const NetworkSpec& net, const std::vector<ScalarSeries>& inputs) {
  if (inputs.size() != net.node_count()) throw InputError("one input series per node required");
  std::size_t n = inputs.empty() ? 0 : inputs.front().size();
  for (const auto& s : inputs)
    if (s.size() != n) throw InputError("input series differ in length");
  return run(net, n, 0, [&](std::size_t i, std::size_t k) { return inputs[i].samples[k]; });
}

}  // namespace cyclotopo
