#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace specforge {

/// Worker cap from SPECFORGE_THREADS (0 or unset = auto).
std::size_t thread_budget();

/// Index-parallel loop with deterministic per-index output slots.
/// Runs inline when the budget is 1 or the range is small.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Shortest decimal string that round-trips a binary64 (<= 17 significant digits).
std::string format_double(double v);

/// Write-to-temp-then-rename so readers never observe partial files.
void atomic_write_file(const std::string& path, const std::string& contents);

} // namespace specforge
