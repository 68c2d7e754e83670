#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cyclotopo/signal.hpp"

namespace cyclotopo {

/// Columns `k,node<i>_re,node<i>_im,...`; each comment becomes a leading
/// `# ` line. Values are written in shortest round-trip form.
void write_series_csv(std::ostream& os, const std::vector<ScalarSeries>& series,
                      const std::vector<std::string>& comments = {});
std::vector<ScalarSeries> read_series_csv(std::istream& is);

/// Little-endian `CYG1`, u32 node count, u32 sample count, then row-major
/// float32 (re, im) pairs. Node ids must be 1..count.
void write_series_binary(std::ostream& os, const std::vector<ScalarSeries>& series);
std::vector<ScalarSeries> read_series_binary(std::istream& is);

/// Format chosen by content (magic) on read, by extension `.bin` on write.
void save_series(const std::string& path, const std::vector<ScalarSeries>& series,
                 const std::vector<std::string>& comments = {});
std::vector<ScalarSeries> load_series(const std::string& path);

}  // namespace cyclotopo
