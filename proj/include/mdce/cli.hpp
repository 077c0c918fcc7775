#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdce/config.hpp"
#include "mdce/kernels.hpp"

namespace mdce::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// A configuration whose validity report has failing checks.
class ValidationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Artifact {
  std::string path;
  std::string content;
};

struct Rendered {
  std::vector<Artifact> files;
  /// Printed to standard output (params table).
  std::string text;
  std::vector<std::string> warnings;
};

/// Produces every output of a run in memory. Deterministic: identical
/// configurations give byte-identical artifacts.
Rendered render(const RunConfig& cfg, Execution exec = Execution::parallel);

/// Writes all artifacts; on failure removes the ones already written and rethrows.
void write_artifacts(const std::vector<Artifact>& files);

/// Full command-line entry point; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdce::cli
