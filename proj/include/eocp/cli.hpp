#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "eocp/bounds.hpp"
#include "eocp/config.hpp"
#include "eocp/sim.hpp"

namespace eocp {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kCsvSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitIo = 3;

// Environment variable consulted when --threads is not given.
inline constexpr const char* kThreadsEnv = "EOCP_THREADS";

struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  std::optional<unsigned> threads;  // 0 = hardware concurrency
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> iterations;
  std::optional<std::uint64_t> horizon;
};

struct ConcCheckOptions {
  std::string lemma;
  ConcentrationParams params;
  std::string family = "gaussian";
  std::uint64_t trials = 0;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;
};

// Writes regret.csv, commit.csv and meta.json.
int cmd_run(const RunOptions& options, std::ostream& err);
// Writes bounds.csv: one row per (bound, T).
int cmd_bounds(const std::filesystem::path& config, const std::filesystem::path& out_dir,
               std::ostream& err);
// Writes conc.csv; exits 0 whether or not the bound dominates.
int cmd_conc_check(const ConcCheckOptions& options, std::ostream& err);

// Every bound row for one configuration, in output order.
std::vector<BoundReport> bound_table(const ExperimentConfig& config);

// Subcommand dispatch: run | bounds | conc-check.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// printf("%.17g")
std::string format_real(double value);

}  // namespace eocp
