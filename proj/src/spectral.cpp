#include "cyclotopo/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

#include "cyclotopo/error.hpp"
#include "fft.hpp"

namespace cyclotopo {

namespace {

constexpr std::size_t kSegmentChunk = 128;
constexpr double kMaxCondition = 1e12;

std::size_t welch_step(const WelchParams& p) {
  if (p.segment_length < 2) throw InputError("segment length must be at least 2");
  if (!(p.overlap >= 0.0 && p.overlap < 1.0)) throw InputError("overlap must lie in [0, 1)");
  if (p.stride < 1) throw InputError("frequency stride must be at least 1");
  auto step = static_cast<std::size_t>(std::llround(static_cast<double>(p.segment_length) * (1.0 - p.overlap)));
  return std::max<std::size_t>(step, 1);
}

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

std::size_t SpectralGrid::index_of(NodeId id) const {
  auto it = std::find(nodes.begin(), nodes.end(), id);
  if (it == nodes.end()) throw InputError("node " + std::to_string(id) + " is not in the spectral grid");
  return static_cast<std::size_t>(it - nodes.begin());
}

Eigen::MatrixXcd SpectralGrid::block(std::size_t f, NodeId row, NodeId col) const {
  const Eigen::Index T = period;
  return matrices.at(f).block(static_cast<Eigen::Index>(index_of(row)) * T, static_cast<Eigen::Index>(index_of(col)) * T,
                              T, T);
}

SpectralGrid SpectralGrid::restrict(const std::vector<NodeId>& keep) const {
  SpectralGrid out;
  out.omegas = omegas;
  out.period = period;
  out.nodes = keep;
  out.effective_segments = effective_segments;
  const Eigen::Index T = period;
  const Eigen::Index n = static_cast<Eigen::Index>(keep.size()) * T;
  std::vector<Eigen::Index> rows;
  for (NodeId id : keep) {
    Eigen::Index base = static_cast<Eigen::Index>(index_of(id)) * T;
    for (Eigen::Index p = 0; p < T; ++p) rows.push_back(base + p);
  }
  for (const auto& m : matrices) {
    Eigen::MatrixXcd sub(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) sub(r, c) = m(rows[r], rows[c]);
    out.matrices.push_back(std::move(sub));
  }
  return out;
}

std::vector<double> fft_grid(std::size_t segment_length, std::size_t stride) {
  if (stride < 1) throw InputError("frequency stride must be at least 1");
  std::vector<double> out;
  for (std::size_t f = 0; f < segment_length; f += stride)
    out.push_back(2.0 * std::numbers::pi * static_cast<double>(f) / static_cast<double>(segment_length));
  return out;
}

std::vector<double> window_taps(Window w, std::size_t length) {
  std::vector<double> taps(length, 1.0);
  if (w == Window::hann) {
    // periodic Hann, the usual choice for spectral averaging
    for (std::size_t n = 0; n < length; ++n)
      taps[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(length));
  }
  return taps;
}

std::size_t welch_segments(std::size_t samples, const WelchParams& params) {
  std::size_t step = welch_step(params);
  if (samples < params.segment_length) return 0;
  return (samples - params.segment_length) / step + 1;
}

double welch_effective_segments(std::size_t samples, const WelchParams& params) {
  std::size_t K = welch_segments(samples, params);
  if (K == 0) return 0.0;
  std::size_t step = welch_step(params);
  std::vector<double> w = window_taps(params.window, params.segment_length);
  double energy = 0.0;
  for (double v : w) energy += v * v;
  double inflation = 1.0;
  for (std::size_t j = 1; j * step < params.segment_length && j < K; ++j) {
    double c = 0.0;
    for (std::size_t n = 0; n + j * step < params.segment_length; ++n) c += w[n] * w[n + j * step];
    c /= energy;
    inflation += 2.0 * (1.0 - static_cast<double>(j) / static_cast<double>(K)) * c * c;
  }
  return static_cast<double>(K) / inflation;
}

namespace {

// Sum over segments of X_f X_f^* for every kept bin, streams stacked as rows.
std::vector<Eigen::MatrixXcd> accumulate_periodograms(const std::vector<const std::vector<Complex>*>& streams,
                                                      const WelchParams& params, std::size_t& segments) {
  const std::size_t n = streams.front()->size();
  const std::size_t L = params.segment_length;
  const std::size_t step = welch_step(params);
  if (n < 2 * L)
    throw InputError("series of " + std::to_string(n) + " samples is shorter than two segments of " +
                     std::to_string(L));
  segments = welch_segments(n, params);
  const std::size_t S = streams.size();
  std::vector<double> w = window_taps(params.window, L);

  std::vector<std::size_t> bins;
  for (std::size_t f = 0; f < L; f += params.stride) bins.push_back(f);
  std::vector<Eigen::MatrixXcd> acc(bins.size(), Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(S)));

  std::vector<Complex> buf;
  Eigen::MatrixXcd Y;
  for (std::size_t first = 0; first < segments; first += kSegmentChunk) {
    std::size_t count = std::min(kSegmentChunk, segments - first);
    buf.assign(S * count * L, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      const auto& x = *streams[s];
      for (std::size_t b = 0; b < count; ++b) {
        std::size_t start = (first + b) * step;
        Complex* dst = buf.data() + (s * count + b) * L;
        for (std::size_t t = 0; t < L; ++t) dst[t] = w[t] * x[start + t];
      }
    }
    detail::fft_forward_many(buf.data(), L, S * count);
    Y.resize(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(count));
    for (std::size_t k = 0; k < bins.size(); ++k) {
      for (std::size_t s = 0; s < S; ++s)
        for (std::size_t b = 0; b < count; ++b)
          Y(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(b)) = buf[(s * count + b) * L + bins[k]];
      acc[k].noalias() += Y * Y.adjoint();
    }
  }
  double energy = 0.0;
  for (double v : w) energy += v * v;
  double scale = 1.0 / (static_cast<double>(segments) * energy);
  for (auto& m : acc) m *= scale;
  return acc;
}

}  // namespace

std::vector<Complex> welch_cross_psd(const std::vector<Complex>& x, const std::vector<Complex>& y,
                                     const WelchParams& params) {
  if (x.size() != y.size()) throw InputError("cross spectrum needs equal-length series");
  std::size_t segments = 0;
  auto acc = accumulate_periodograms({&x, &y}, params, segments);
  std::vector<Complex> out;
  out.reserve(acc.size());
  for (const auto& m : acc) out.push_back(m(0, 1));
  return out;
}

SpectralGrid estimate_block_psd(const std::vector<LiftedSeries>& series, const WelchParams& params) {
  if (series.empty()) throw InputError("no series to estimate");
  const int T = series.front().period();
  const std::size_t blocks = series.front().block_count();
  for (const auto& s : series) {
    if (s.period() != T) throw InputError("lifted series differ in period");
    if (s.block_count() != blocks) throw InputError("lifted series differ in block count");
  }
  std::vector<std::vector<Complex>> comps;
  comps.reserve(series.size() * T);
  for (const auto& s : series)
    for (int p = 0; p < T; ++p) comps.push_back(s.component(p));
  std::vector<const std::vector<Complex>*> streams;
  for (const auto& c : comps) streams.push_back(&c);

  SpectralGrid grid;
  std::size_t segments = 0;
  grid.matrices = accumulate_periodograms(streams, params, segments);
  for (auto& m : grid.matrices) m = hermitian_part(m);
  grid.omegas = fft_grid(params.segment_length, params.stride);
  grid.period = T;
  for (const auto& s : series) grid.nodes.push_back(s.node_id());
  grid.effective_segments = welch_effective_segments(blocks, params);
  return grid;
}

SpectralGrid invert_psd(const SpectralGrid& grid, double ridge, std::vector<std::string>* warnings) {
  if (ridge < 0.0) throw InputError("ridge must be nonnegative");
  SpectralGrid out = grid;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const Eigen::MatrixXcd& M = grid.matrices[f];
    if (!M.isApprox(M.adjoint(), 1e-8) && !(M - M.adjoint()).isZero(1e-12))
      throw InputError("matrix at omega=" + std::to_string(grid.omegas[f]) + " is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitian_part(M));
    Eigen::VectorXd lambda = eig.eigenvalues();
    double lmax = lambda.maxCoeff();
    if (!(lmax > 0.0)) throw NumericalError("PSD at omega=" + std::to_string(grid.omegas[f]) + " has no positive eigenvalue");
    for (Eigen::Index k = 0; k < lambda.size(); ++k)
      if (lambda(k) < 0.0) lambda(k) = 1e-10 * lmax;
    lambda.array() += ridge;
    double cond = lambda.maxCoeff() / lambda.minCoeff();
    if (cond > kMaxCondition && ridge == 0.0) {
      double automatic = 1e-8 * lambda.sum() / static_cast<double>(lambda.size());
      lambda.array() += automatic;
      cond = lambda.maxCoeff() / lambda.minCoeff();
      if (warnings)
        warnings->push_back("automatic ridge " + std::to_string(automatic) + " applied at omega=" +
                            std::to_string(grid.omegas[f]));
    }
    if (cond > kMaxCondition)
      throw NumericalError("PSD at omega=" + std::to_string(grid.omegas[f]) + " is singular (condition " +
                           std::to_string(cond) + ")");
    const auto& V = eig.eigenvectors();
    out.matrices[f] = hermitian_part(V * lambda.cwiseInverse().asDiagonal() * V.adjoint());
  }
  return out;
}

namespace {

int resolve_period(const NetworkSpec& net, int period) {
  int T = period > 0 ? period : net.period();
  if (T < 1) throw InputError("period must be at least 1");
  for (NodeId id : net.nodes()) {
    try {
      net.input(id).lifted_psd(T, 0.0);
    } catch (const InputError& e) {
      throw InputError("node " + std::to_string(id) + ": " + e.what());
    }
  }
  return T;
}

SpectralGrid exact_grid(const NetworkSpec& net, const std::vector<double>& omegas, int period, bool inverse) {
  net.validate();
  SpectralGrid grid;
  grid.omegas = omegas;
  grid.period = resolve_period(net, period);
  grid.nodes = net.nodes();
  const Eigen::Index n = static_cast<Eigen::Index>(net.node_count()) * grid.period;
  for (double w : omegas) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) - net.lifted_transfer(grid.period, w);
    Eigen::MatrixXcd PE = net.lifted_input_psd(grid.period, w);
    Eigen::MatrixXcd M;
    if (inverse) {
      M = A.adjoint() * PE.inverse() * A;
    } else {
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
      Eigen::MatrixXcd Ainv = lu.inverse();
      M = Ainv * PE * Ainv.adjoint();
    }
    grid.matrices.push_back(hermitian_part(M));
  }
  return grid;
}

std::vector<Eigen::Index> lifted_rows(const NetworkSpec& net, const std::vector<NodeId>& ids, int T) {
  std::vector<Eigen::Index> rows;
  for (NodeId id : ids)
    for (int p = 0; p < T; ++p) rows.push_back(static_cast<Eigen::Index>(net.index_of(id)) * T + p);
  return rows;
}

Eigen::MatrixXcd take(const Eigen::MatrixXcd& m, const std::vector<Eigen::Index>& r, const std::vector<Eigen::Index>& c) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(c.size()));
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = 0; b < c.size(); ++b) out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = m(r[a], c[b]);
  return out;
}

}  // namespace

SpectralGrid exact_psd(const NetworkSpec& net, const std::vector<double>& omegas, int period) {
  return exact_grid(net, omegas, period, false);
}

SpectralGrid exact_inverse_psd(const NetworkSpec& net, const std::vector<double>& omegas, int period) {
  return exact_grid(net, omegas, period, true);
}

OracleComponents exact_latent_components(const NetworkSpec& net, const std::vector<double>& omegas, int period) {
  net.validate();
  OracleComponents oc;
  oc.omegas = omegas;
  oc.period = resolve_period(net, period);
  oc.observed = net.observed();
  oc.hidden.assign(net.hidden().begin(), net.hidden().end());
  const int T = oc.period;
  auto ro = lifted_rows(net, oc.observed, T);
  auto rh = lifted_rows(net, oc.hidden, T);
  const Eigen::Index n = static_cast<Eigen::Index>(net.node_count()) * T;
  const Eigen::Index no = static_cast<Eigen::Index>(ro.size());

  for (double w : omegas) {
    Eigen::MatrixXcd H = net.lifted_transfer(T, w);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) - H;
    Eigen::MatrixXcd PEinv = net.lifted_input_psd(T, w).inverse();
    Eigen::MatrixXcd J = A.adjoint() * PEinv * A;
    LatentBlocks b;
    b.J_oo = take(J, ro, ro);
    b.J_oh = take(J, ro, rh);
    b.J_ho = take(J, rh, ro);
    b.J_hh = take(J, rh, rh);
    Eigen::MatrixXcd Aoo = take(A, ro, ro);
    b.Gamma = Aoo.adjoint() * take(PEinv, ro, ro) * Aoo;
    if (rh.empty()) {
      b.Delta = Eigen::MatrixXcd::Zero(no, no);
      b.Sigma = Eigen::MatrixXcd::Zero(no, no);
      b.Lambda = Eigen::MatrixXcd::Zero(0, 0);
      b.Psi = Eigen::MatrixXcd::Zero(0, no);
      b.observed_inverse = b.J_oo;
    } else {
      Eigen::MatrixXcd Hho = take(H, rh, ro);
      b.Delta = Hho.adjoint() * take(PEinv, rh, rh) * Hho;
      b.Lambda = b.J_hh;
      b.Psi = -b.J_ho;
      Eigen::FullPivLU<Eigen::MatrixXcd> lu(b.Lambda);
      if (!lu.isInvertible())
        throw NumericalError("hidden block is singular at omega=" + std::to_string(w));
      b.Sigma = -b.Psi.adjoint() * lu.solve(b.Psi);
      b.observed_inverse = b.J_oo - b.J_oh * lu.solve(b.J_ho);
    }
    oc.blocks.push_back(std::move(b));
  }
  return oc;
}

SpectralGrid OracleComponents::observed_inverse_grid() const {
  SpectralGrid g;
  g.omegas = omegas;
  g.period = period;
  g.nodes = observed;
  for (const auto& b : blocks) g.matrices.push_back(hermitian_part(b.observed_inverse));
  return g;
}

double OracleComponents::identity_error(const NetworkSpec& net) const {
  SpectralGrid phi = exact_psd(net, omegas, period).restrict(observed);
  double worst = 0.0;
  for (std::size_t f = 0; f < blocks.size(); ++f) {
    const auto& b = blocks[f];
    double scale = std::max(b.observed_inverse.cwiseAbs().maxCoeff(), 1e-300);
    double split = (b.observed_inverse - (b.Gamma + b.Delta + b.Sigma)).cwiseAbs().maxCoeff() / scale;
    double direct = (b.observed_inverse - phi.matrices[f].inverse()).cwiseAbs().maxCoeff() / scale;
    worst = std::max({worst, split, direct});
  }
  return worst;
}

void write_spectral_dump(std::ostream& os, const SpectralGrid& grid, const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "omega,i,j,p,t,re,im\n";
  const int T = grid.period;
  std::string line;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto& M = grid.matrices[f];
    for (std::size_t a = 0; a < grid.nodes.size(); ++a)
      for (std::size_t b = 0; b < grid.nodes.size(); ++b)
        for (int p = 0; p < T; ++p)
          for (int t = 0; t < T; ++t) {
            Complex v = M(static_cast<Eigen::Index>(a) * T + p, static_cast<Eigen::Index>(b) * T + t);
            line.clear();
            append_double(line, grid.omegas[f]);
            line += ',' + std::to_string(grid.nodes[a]) + ',' + std::to_string(grid.nodes[b]) + ',' +
                    std::to_string(p) + ',' + std::to_string(t) + ',';
            append_double(line, v.real());
            line += ',';
            append_double(line, v.imag());
            line += '\n';
            os << line;
          }
  }
}

double block_norm(const SpectralGrid& grid, NodeId a, NodeId b) {
  double best = 0.0;
  for (std::size_t f = 0; f < grid.size(); ++f) best = std::max(best, grid.block(f, a, b).cwiseAbs().maxCoeff());
  return best;
}

}  // namespace cyclotopo
