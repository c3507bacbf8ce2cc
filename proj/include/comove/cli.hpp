#pragma once

namespace comove {

/// Batch CLI entry point. Exit codes: 0 success, 2 usage error, 3 data
/// error, 4 numeric failure.
int run_cli(int argc, const char* const* argv);

} // namespace comove
