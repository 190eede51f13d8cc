#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "grppa/lvggms.hpp"

namespace grppa::lvggms {

/**
 * Text container for an instance:
 *
 *   grppa-lvggms-instance 1
 *   n <n>
 *   nu <ν>
 *   mu <μ>
 *   seed <seed|none>
 *   density <density|none>
 *   C
 *   <n rows of n values, row-major, %.17g>
 *
 * Values round-trip exactly.
 */
void write_instance(std::ostream& os, const Instance& instance);
Instance read_instance(std::istream& is);

/// Throws std::runtime_error if the file cannot be opened or parsed.
void save_instance(const std::filesystem::path& path, const Instance& instance);
Instance load_instance(const std::filesystem::path& path);

/// Reference objective F* cached next to an instance file.
struct Reference {
  long iterations = 0;
  double objective = 0.0;
};

std::filesystem::path reference_path(const std::filesystem::path& instance_path);
void save_reference(const std::filesystem::path& instance_path, const Reference& ref);
/// Empty when no cached reference exists or it was computed with a different iteration count.
std::optional<Reference> load_reference(const std::filesystem::path& instance_path, long iterations);

}  // namespace grppa::lvggms
