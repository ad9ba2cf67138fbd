#include "iterlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace iterlab {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_matrix_json(std::ostream& os, const Matrix& m) {
  os << "{\"rows\":" << m.rows() << ",\"cols\":" << m.cols() << ",\"re\":[";
  bool first = true;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (!first) os << ',';
      first = false;
      os << format_double(m(r, c).real());
    }
  os << "],\"im\":[";
  first = true;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (!first) os << ',';
      first = false;
      os << format_double(m(r, c).imag());
    }
  os << "]}";
}

std::string matrix_to_json(const Matrix& m) {
  std::ostringstream os;
  write_matrix_json(os, m);
  return os.str();
}

namespace {

Matrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (rows < 1 || cols < 1) throw std::invalid_argument("matrix json: bad dimensions");
  if (static_cast<Eigen::Index>(re.size()) != rows * cols ||
      static_cast<Eigen::Index>(im.size()) != rows * cols)
    throw std::invalid_argument("matrix json: entry count does not match dimensions");
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::size_t k = static_cast<std::size_t>(r * cols + c);
      m(r, c) = Complex(re.at(k).get<double>(), im.at(k).get<double>());
    }
  if (!m.allFinite()) throw std::invalid_argument("matrix json: non-finite entries");
  return m;
}

}  // namespace

Matrix matrix_from_json_text(const std::string& text) {
  return matrix_from_json(nlohmann::json::parse(text));
}

void write_comb_file(const std::string& path, const CombOperator& comb,
                     const CombFileHeader& header) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_comb_file: cannot open '" + path + "'");
  os << "{\"header\":{\"d\":" << header.d << ",\"n\":" << header.n
     << ",\"samples\":" << header.samples << ",\"seed\":" << header.seed
     << ",\"primal_value\":" << format_double(header.primal_value) << "},\"matrix\":";
  write_matrix_json(os, comb.R);
  os << "}\n";
  if (!os) throw std::runtime_error("write_comb_file: write failed for '" + path + "'");
}

std::pair<CombOperator, CombFileHeader> read_comb_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_comb_file: cannot open '" + path + "'");
  nlohmann::json j;
  is >> j;
  CombFileHeader header;
  const auto& h = j.at("header");
  header.d = h.at("d").get<int>();
  header.n = h.at("n").get<long>();
  header.samples = h.at("samples").get<std::int64_t>();
  header.seed = h.at("seed").get<std::uint64_t>();
  header.primal_value = h.at("primal_value").get<double>();
  Matrix R = matrix_from_json(j.at("matrix"));
  return {make_comb(header.d, std::move(R)), header};
}

std::string report_to_json(const StrategyReport& r) {
  std::ostringstream os;
  os << "{\"strategy\":\"" << to_string(r.strategy) << "\",\"d\":" << r.d
     << ",\"n\":" << r.n << ",\"fidelity\":" << format_double(r.fidelity)
     << ",\"stderr\":" << format_double(r.std_error) << ",\"samples\":" << r.samples
     << ",\"seed\":" << r.seed << "}";
  return os.str();
}

std::string sdp_summary_to_json(const SdpSolution& sol, int d, long n,
                                std::int64_t samples, std::uint64_t seed) {
  std::ostringstream os;
  os << "{\"primal_value\":" << format_double(sol.primal_value)
     << ",\"gap\":" << format_double(sol.gap)
     << ",\"feasibility_residual\":" << format_double(sol.feasibility_residual)
     << ",\"iterations\":" << sol.iterations << ",\"status\":\"" << to_string(sol.status)
     << "\",\"d\":" << d << ",\"n\":" << n << ",\"samples\":" << samples
     << ",\"seed\":" << seed << "}";
  return os.str();
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& a = table.rows[i - 1];
    const auto& b = table.rows[i];
    const auto ka = std::make_tuple(to_string(a.strategy), a.d, a.n);
    const auto kb = std::make_tuple(to_string(b.strategy), b.d, b.n);
    if (!(ka < kb)) throw std::invalid_argument("write_sweep_csv: rows not sorted and unique");
  }
  os << "# iterlab " << table.tool_version << " seed=" << table.seed;
  if (!table.grid_note.empty()) os << ' ' << table.grid_note;
  os << '\n';
  os << "# generated: " << table.timestamp << '\n';
  os << "strategy,d,n,fidelity,stderr,samples,seed\n";
  for (const auto& r : table.rows) {
    os << to_string(r.strategy) << ',' << r.d << ',' << r.n << ','
       << format_double(r.fidelity) << ',' << format_double(r.std_error) << ','
       << r.samples << ',' << r.seed << '\n';
  }
}

std::vector<StrategyReport> parse_sweep_csv(std::istream& is) {
  std::vector<StrategyReport> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "strategy,d,n,fidelity,stderr,samples,seed")
        throw std::invalid_argument("parse_sweep_csv: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      throw std::invalid_argument("parse_sweep_csv: malformed row '" + line + "'");
    StrategyReport r;
    r.strategy = strategy_from_string(fields[0]);
    r.d = std::stoi(fields[1]);
    r.n = std::stol(fields[2]);
    r.fidelity = std::stod(fields[3]);
    r.std_error = std::stod(fields[4]);
    r.samples = std::stoll(fields[5]);
    r.seed = std::stoull(fields[6]);
    rows.push_back(r);
  }
  if (!header_seen) throw std::invalid_argument("parse_sweep_csv: missing header");
  return rows;
}

}  // namespace iterlab
