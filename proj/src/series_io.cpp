#include "cyclotopo/series_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cyclotopo/error.hpp"

namespace cyclotopo {

namespace {

constexpr char kMagic[4] = {'C', 'Y', 'G', '1'};

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InputError("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

void check_lengths(const std::vector<ScalarSeries>& series) {
  for (const auto& s : series)
    if (s.size() != series.front().size()) throw InputError("series differ in length");
}

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get_le(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw InputError("truncated binary series file");
  return v;
}

}  // namespace

void write_series_csv(std::ostream& os, const std::vector<ScalarSeries>& series,
                      const std::vector<std::string>& comments) {
  check_lengths(series);
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "k";
  for (const auto& s : series) os << ",node" << s.node_id << "_re,node" << s.node_id << "_im";
  os << '\n';
  std::size_t n = series.empty() ? 0 : series.front().size();
  std::string line;
  for (std::size_t k = 0; k < n; ++k) {
    line.clear();
    line += std::to_string(k);
    for (const auto& s : series) {
      line += ',';
      append_double(line, s.samples[k].real());
      line += ',';
      append_double(line, s.samples[k].imag());
    }
    line += '\n';
    os << line;
  }
}

std::vector<ScalarSeries> read_series_csv(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<ScalarSeries> out;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto cells = split(view);
    if (!have_header) {
      if (cells.empty() || trim(cells[0]) != "k" || cells.size() % 2 != 1)
        throw InputError("series header must be k,node<i>_re,node<i>_im,...");
      for (std::size_t c = 1; c < cells.size(); c += 2) {
        std::string_view re = trim(cells[c]), im = trim(cells[c + 1]);
        if (!re.starts_with("node") || !re.ends_with("_re") || !im.ends_with("_im"))
          throw InputError("bad series column '" + std::string(re) + "'");
        std::string_view id = re.substr(4, re.size() - 7);
        int node = 0;
        auto res = std::from_chars(id.data(), id.data() + id.size(), node);
        if (res.ec != std::errc() || res.ptr != id.data() + id.size())
          throw InputError("bad node id in column '" + std::string(re) + "'");
        if (im != "node" + std::string(id) + "_im") throw InputError("column pair mismatch for node " + std::string(id));
        out.push_back(ScalarSeries{node, {}});
      }
      have_header = true;
      continue;
    }
    if (cells.size() != 1 + 2 * out.size())
      throw InputError("line " + std::to_string(lineno) + ": expected " + std::to_string(1 + 2 * out.size()) +
                       " columns");
    for (std::size_t s = 0; s < out.size(); ++s) {
      double re = parse_double(trim(cells[1 + 2 * s]), lineno);
      double im = parse_double(trim(cells[2 + 2 * s]), lineno);
      out[s].samples.emplace_back(re, im);
    }
  }
  if (!have_header) throw InputError("empty series file");
  return out;
}

void write_series_binary(std::ostream& os, const std::vector<ScalarSeries>& series) {
  check_lengths(series);
  for (std::size_t s = 0; s < series.size(); ++s)
    if (series[s].node_id != static_cast<NodeId>(s + 1))
      throw InputError("binary series format requires node ids 1..count in order");
  std::size_t n = series.empty() ? 0 : series.front().size();
  if (series.size() > UINT32_MAX || n > UINT32_MAX) throw InputError("series too large for binary format");
  os.write(kMagic, 4);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(series.size()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(n));
  std::vector<float> row(2 * series.size());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t s = 0; s < series.size(); ++s) {
      row[2 * s] = static_cast<float>(series[s].samples[k].real());
      row[2 * s + 1] = static_cast<float>(series[s].samples[k].imag());
    }
    os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
}

std::vector<ScalarSeries> read_series_binary(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw InputError("not a CYG1 series file");
  auto count = get_le<std::uint32_t>(is);
  auto n = get_le<std::uint32_t>(is);
  std::vector<ScalarSeries> out(count);
  for (std::uint32_t s = 0; s < count; ++s) {
    out[s].node_id = static_cast<NodeId>(s + 1);
    out[s].samples.resize(n);
  }
  std::vector<float> row(2 * static_cast<std::size_t>(count));
  for (std::uint32_t k = 0; k < n; ++k) {
    is.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!is) throw InputError("truncated binary series file");
    for (std::uint32_t s = 0; s < count; ++s) out[s].samples[k] = Complex(row[2 * s], row[2 * s + 1]);
  }
  return out;
}

void save_series(const std::string& path, const std::vector<ScalarSeries>& series,
                 const std::vector<std::string>& comments) {
  bool binary = path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw InputError("cannot open '" + path + "' for writing");
  if (binary)
    write_series_binary(os, series);
  else
    write_series_csv(os, series, comments);
  if (!os) throw InputError("write failed for '" + path + "'");
}

std::vector<ScalarSeries> load_series(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open '" + path + "'");
  char magic[4] = {};
  is.read(magic, 4);
  bool binary = is && std::memcmp(magic, kMagic, 4) == 0;
  is.clear();
  is.seekg(0);
  return binary ? read_series_binary(is) : read_series_csv(is);
}

}  // namespace cyclotopo
