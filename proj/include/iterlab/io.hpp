#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "iterlab/sdp.hpp"
#include "iterlab/strategies.hpp"
#include "iterlab/tensor.hpp"

namespace iterlab {

/// Shortest text keeping full double precision (printf %.17g).
std::string format_double(double x);

/// Matrix as {"rows": r, "cols": c, "re": [...], "im": [...]} with row-major
/// arrays of doubles.
void write_matrix_json(std::ostream& os, const Matrix& m);
std::string matrix_to_json(const Matrix& m);
/// Parses the schema above; rejects size mismatches and non-finite entries.
Matrix matrix_from_json_text(const std::string& text);

struct CombFileHeader {
  int d = 0;
  long n = 0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  double primal_value = 0.0;
};

void write_comb_file(const std::string& path, const CombOperator& comb,
                     const CombFileHeader& header);
std::pair<CombOperator, CombFileHeader> read_comb_file(const std::string& path);

/// One JSON object per report, keys strategy, d, n, fidelity, stderr,
/// samples, seed.
std::string report_to_json(const StrategyReport& r);

std::string sdp_summary_to_json(const SdpSolution& sol, int d, long n,
                                std::int64_t samples, std::uint64_t seed);

/// Sweep rows with their run provenance. Rows are kept sorted by
/// (strategy name, d, n) with no duplicate keys.
struct SweepTable {
  std::vector<StrategyReport> rows;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string timestamp;  // ISO-8601 UTC
  std::string grid_note;  // e.g. "figure=4 n=1..8"
};

/// CSV with header `strategy,d,n,fidelity,stderr,samples,seed`, LF endings.
/// Provenance goes into leading '#' comment lines (the timestamp on its own
/// line, so reruns differ only there).
void write_sweep_csv(std::ostream& os, const SweepTable& table);

/// Parses the CSV above, ignoring comment lines. Values round-trip exactly.
std::vector<StrategyReport> parse_sweep_csv(std::istream& is);

}  // namespace iterlab
