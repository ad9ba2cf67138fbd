// iterlab: fidelities of single-query approximations to iterated unknown
// gates. Subcommands compute one data point, reproduce figure sweeps as CSV,
// run sampler diagnostics, and solve the comb optimization.

#include <atomic>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "iterlab/io.hpp"
#include "iterlab/sdp.hpp"
#include "iterlab/strategies.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace iterlab;

std::uint64_t parse_seed_text(const std::string& text) {
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(text, &pos, 0);  // accepts decimal and 0x-hex
  if (pos != text.size()) throw std::invalid_argument("bad seed '" + text + "'");
  return v;
}

// Flag wins over the ITERLAB_SEED environment variable, which wins over the
// built-in default.
std::uint64_t resolve_seed(const std::optional<std::string>& flag_value) {
  if (flag_value) return parse_seed_text(*flag_value);
  if (const char* env = std::getenv("ITERLAB_SEED")) return parse_seed_text(env);
  return kDefaultSeed;
}

std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw std::runtime_error("cannot open output file '" + out_path + "'");
  os << text;
}

struct SdpFlags {
  double tol_feas = 1e-8;
  double tol_gap = 1e-4;
  long max_iter = 200000;
};

std::int64_t auto_samples(Strategy s, int d, std::int64_t requested) {
  if (requested > 0) return requested;
  switch (s) {
    case Strategy::estimation: return 10000;       // operator-valued MC
    case Strategy::optimal: return d == 2 ? 100000 : 30000;
    case Strategy::random:
    case Strategy::identity:
    case Strategy::direct: return 0;               // closed forms
    default: return 100000;                        // scalar MC
  }
}

struct OptimalRun {
  StrategyReport report;
  SdpSolution solution;
  std::int64_t samples = 0;
};

OptimalRun run_optimal(int d, long n, std::int64_t samples, std::uint64_t seed,
                       std::uint64_t stream, const SdpFlags& flags) {
  RngStream rng(seed, stream);
  const ObjectiveMatrix obj = build_objective(n, d, samples, rng);
  OptimalRun run;
  run.solution = solve_optimal(obj, d, flags.tol_feas, flags.tol_gap, flags.max_iter);
  run.samples = samples;
  // The stderr column carries the certified duality gap for optimal rows.
  run.report = make_report(Strategy::optimal, d, n, run.solution.primal_value,
                           std::isfinite(run.solution.gap) ? run.solution.gap : 0.0,
                           samples, seed);
  return run;
}

StrategyReport run_strategy(Strategy s, int d, long n, std::int64_t samples,
                            std::uint64_t seed, std::uint64_t stream,
                            const SdpFlags& flags, SdpStatus* status_out = nullptr) {
  RngStream rng(seed, stream);
  StrategyReport r;
  switch (s) {
    case Strategy::random: r = f_random(n, d); break;
    case Strategy::random_mc: r = f_random_mc(n, d, samples, rng); break;
    case Strategy::estimation: r = f_estimation(n, d, samples, rng); break;
    case Strategy::estimation_onb: r = f_estimation_onb(n, d, samples, rng); break;
    case Strategy::identity: r = f_identity(n, d); break;
    case Strategy::direct: r = f_direct_closed(n, d); break;
    case Strategy::direct_mc: r = f_direct_mc(n, d, samples, rng); break;
    case Strategy::optimal: {
      const OptimalRun run = run_optimal(d, n, samples, seed, stream, flags);
      if (status_out) *status_out = run.solution.status;
      r = run.report;
      break;
    }
  }
  r.seed = seed;  // closed forms report the configured seed for table coherence
  return r;
}

int cmd_fidelity(const std::string& strategy_name, int d, long n, std::int64_t samples,
                 const std::optional<std::string>& seed_flag, const SdpFlags& flags,
                 const std::string& format, const std::string& out_path) {
  const Strategy s = strategy_from_string(strategy_name);
  const std::uint64_t seed = resolve_seed(seed_flag);
  SdpStatus status = SdpStatus::optimal;
  const StrategyReport r =
      run_strategy(s, d, n, auto_samples(s, d, samples), seed, 0, flags, &status);

  std::ostringstream os;
  if (format == "csv") {
    SweepTable table{{r}, kVersion, seed, utc_timestamp(), ""};
    write_sweep_csv(os, table);
  } else {
    os << report_to_json(r) << '\n';
  }
  emit(os.str(), out_path);
  return (s == Strategy::optimal && status != SdpStatus::optimal) ? 3 : 0;
}

struct SweepCell {
  Strategy strategy;
  int d;
  long n;
  std::int64_t samples;
  std::uint64_t stream;
};

int cmd_sweep(int figure, long n_max, std::int64_t samples,
              const std::optional<std::string>& seed_flag, const SdpFlags& flags,
              const std::string& format, const std::string& out_path) {
  const std::uint64_t seed = resolve_seed(seed_flag);

  std::vector<Strategy> strategies;
  std::vector<int> dims;
  long n_hi = 0;
  switch (figure) {
    case 3:  // estimation < random (rows sorted by strategy name)
      strategies = {Strategy::estimation, Strategy::random};
      dims = {2, 3, 4};
      n_hi = 8;
      break;
    case 4:  // direct_mc < identity
      strategies = {Strategy::direct_mc, Strategy::identity};
      dims = {2, 3, 4};
      n_hi = 8;
      break;
    case 5:  // identity < optimal
      strategies = {Strategy::identity, Strategy::optimal};
      dims = {2, 3};
      n_hi = 6;
      break;
    default:
      throw std::invalid_argument("figure must be 3, 4 or 5");
  }
  if (n_max > 0) n_hi = n_max;

  std::vector<SweepCell> cells;
  for (const Strategy s : strategies)
    for (const int d : dims)
      for (long n = 1; n <= n_hi; ++n)
        cells.push_back({s, d, n, auto_samples(s, d, samples),
                         static_cast<std::uint64_t>(cells.size())});

  std::vector<StrategyReport> rows(cells.size());
  std::vector<SdpStatus> statuses(cells.size(), SdpStatus::optimal);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const unsigned workers = std::max(
      1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                             static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        try {
          const auto& c = cells[i];
          rows[i] = run_strategy(c.strategy, c.d, c.n, c.samples, seed, c.stream,
                                 flags, &statuses[i]);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::ostringstream note;
  note << "figure=" << figure << " n=1.." << n_hi;
  SweepTable table{rows, kVersion, seed, utc_timestamp(), note.str()};

  std::ostringstream os;
  if (format == "json") {
    os << "{\"provenance\":{\"tool_version\":\"" << kVersion << "\",\"seed\":" << seed
       << ",\"timestamp\":\"" << table.timestamp << "\"},\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i)
      os << (i ? "," : "") << report_to_json(rows[i]);
    os << "]}\n";
  } else {
    write_sweep_csv(os, table);
  }

  bool solver_trouble = false;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].strategy == Strategy::optimal && statuses[i] != SdpStatus::optimal) {
      solver_trouble = true;
      if (format != "json")
        os << "# warning: solver status=" << to_string(statuses[i])
           << " for d=" << cells[i].d << " n=" << cells[i].n << '\n';
      std::cerr << "iterlab: solver did not converge for d=" << cells[i].d
                << " n=" << cells[i].n << " (status " << to_string(statuses[i]) << ")\n";
    }
  }
  emit(os.str(), out_path);
  return solver_trouble ? 3 : 0;
}

int cmd_haar_check(int d, long n, std::int64_t samples,
                   const std::optional<std::string>& seed_flag, const std::string& out_path) {
  const std::uint64_t seed = resolve_seed(seed_flag);
  RngStream rng(seed, 0);

  double max_residual = 0.0;
  const auto est = mc_scalar_mean(
      [&](RngStream& r) {
        const Matrix u = haar_unitary(d, r);
        const double res = (u.adjoint() * u - Matrix::Identity(d, d)).norm();
        max_residual = std::max(max_residual, res);
        return std::norm(unitary_power(u, n).trace());
      },
      samples, rng);

  const double expected = static_cast<double>(std::min<long>(n, d));
  std::ostringstream os;
  os << "{\"trace_moment_estimate\":" << format_double(est.mean)
     << ",\"expected\":" << format_double(expected)
     << ",\"stderr\":" << format_double(est.std_error)
     << ",\"unitarity_max_residual\":" << format_double(max_residual)
     << ",\"d\":" << d << ",\"n\":" << n << ",\"samples\":" << samples
     << ",\"seed\":" << seed << "}\n";
  emit(os.str(), out_path);
  return std::abs(est.mean - expected) > 5.0 * est.std_error ? 1 : 0;
}

int cmd_sdp(int d, long n, std::int64_t samples, const std::optional<std::string>& seed_flag,
            const SdpFlags& flags, const std::string& dump_path, const std::string& out_path) {
  const std::uint64_t seed = resolve_seed(seed_flag);
  const std::int64_t use_samples = auto_samples(Strategy::optimal, d, samples);
  const OptimalRun run = run_optimal(d, n, use_samples, seed, 0, flags);

  emit(sdp_summary_to_json(run.solution, d, n, use_samples, seed) + "\n", out_path);
  if (!dump_path.empty()) {
    CombFileHeader header{d, n, use_samples, seed, run.solution.primal_value};
    write_comb_file(dump_path, run.solution.comb, header);
  }
  return run.solution.status == SdpStatus::optimal ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iterlab: fidelity laboratory for single-query gate iteration"};
  app.require_subcommand(1);

  std::string strategy_name;
  int d = 2;
  long n = 1;
  long n_max = 0;
  int figure = 0;
  std::int64_t samples = 0;  // 0 = per-strategy default
  std::optional<std::string> seed_flag;
  SdpFlags flags;
  std::string out_path;
  std::string dump_path;
  std::string format = "json";

  auto add_common = [&](CLI::App* cmd, bool with_sdp_flags) {
    cmd->add_option("--samples", samples, "Monte Carlo sample count (0 = default)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", seed_flag, "RNG seed (decimal or 0x-hex)");
    cmd->add_option("--out", out_path, "write output to a file instead of stdout");
    if (with_sdp_flags) {
      cmd->add_option("--tol-feas", flags.tol_feas, "feasibility tolerance")
          ->check(CLI::PositiveNumber);
      cmd->add_option("--tol-gap", flags.tol_gap, "duality gap tolerance")
          ->check(CLI::PositiveNumber);
      cmd->add_option("--max-iter", flags.max_iter, "iteration cap")
          ->check(CLI::PositiveNumber);
    }
  };

  CLI::App* fid = app.add_subcommand("fidelity", "one fidelity data point");
  fid->add_option("--strategy", strategy_name,
                  "random|random_mc|estimation|estimation_onb|identity|direct|direct_mc|optimal")
      ->required();
  fid->add_option("--d", d, "Hilbert space dimension")->required()->check(CLI::Range(2, 16));
  fid->add_option("--n", n, "iteration order")->required()->check(CLI::PositiveNumber);
  fid->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  add_common(fid, true);

  CLI::App* sweep = app.add_subcommand("sweep", "figure-reproduction sweep to CSV");
  sweep->add_option("--figure", figure, "3, 4 or 5")->required()->check(CLI::IsMember({3, 4, 5}));
  sweep->add_option("--n-max", n_max, "override the upper end of the n grid")
      ->check(CLI::PositiveNumber);
  std::string sweep_format = "csv";
  sweep->add_option("--format", sweep_format, "csv|json")->check(CLI::IsMember({"json", "csv"}));
  add_common(sweep, true);

  CLI::App* haar = app.add_subcommand("haar-check", "sampler diagnostics");
  haar->add_option("--d", d, "Hilbert space dimension")->required()->check(CLI::Range(2, 16));
  haar->add_option("--n", n, "moment order")->required()->check(CLI::PositiveNumber);
  add_common(haar, false);

  CLI::App* sdp = app.add_subcommand("sdp", "optimal-iterator comb optimization");
  sdp->add_option("--d", d, "Hilbert space dimension (2 or 3)")
      ->required()
      ->check(CLI::IsMember({2, 3}));
  sdp->add_option("--n", n, "iteration order")->required()->check(CLI::PositiveNumber);
  sdp->add_option("--dump-comb", dump_path, "write the optimizing comb to a JSON file");
  add_common(sdp, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // invalid arguments
  }

  try {
    if (fid->parsed())
      return cmd_fidelity(strategy_name, d, n, samples, seed_flag, flags, format, out_path);
    if (sweep->parsed())
      return cmd_sweep(figure, n_max, samples, seed_flag, flags, sweep_format, out_path);
    if (haar->parsed()) return cmd_haar_check(d, n, samples <= 0 ? 100000 : samples,
                                              seed_flag, out_path);
    if (sdp->parsed())
      return cmd_sdp(d, n, samples, seed_flag, flags, dump_path, out_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "iterlab: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "iterlab: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
