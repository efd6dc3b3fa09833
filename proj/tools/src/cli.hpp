#pragma once

#include "conf/error.hpp"
#include "conf/minkowski2.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace conf::cli {

using json = nlohmann::ordered_json;

extern const char* const kVersion;

/// Everything a command needs; built from a job file, flags, or both.
struct JobSpec {
  int n = 2;
  int nu = 1;
  Frame frame = Frame::Cartesian;
  std::vector<std::string> components;
  std::vector<std::string> variables;  // empty: default coordinate names
  Box region;
  int grid = 17;
  double tolerance = kDefaultTolerance;
  std::string preset;                 // "", "compactification" or "identity"
  std::optional<json> samples;        // fit: inline [{x:[..], y:[..]}, ...]

  Signature signature() const { return Signature(n, nu); }
};

/// Reads the fields present in `j` on top of `base`.
JobSpec job_from_json(const json& j, JobSpec base = {});
JobSpec load_job_file(const std::filesystem::path& path);
/// Fills components and signature for a preset; checks invariants.
void finalize_job(JobSpec& job);
json job_to_json(const JobSpec& job);

struct Outcome {
  json report;
  int exit_code = 2;
  std::string document;  // grid: the SVG text
};

Outcome cmd_check(const JobSpec& job);
Outcome cmd_factor(const JobSpec& job);
Outcome cmd_decompose(const JobSpec& job);
Outcome cmd_fit(const JobSpec& job);
Outcome cmd_grid(const JobSpec& job);

/// Report for a job that never reached the numerical checks.
Outcome error_outcome(const Error& e, const std::optional<JobSpec>& job, const std::string& command = {});

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

/// Writes through a sibling temporary file and a rename. Throws IoError.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Full command-line entry point. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace conf::cli
