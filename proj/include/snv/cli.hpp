#pragma once

namespace snv {

/// Full command-line entry point; returns the process exit code
/// (0 success, 1 usage/config error, 2 invariant or diagnostic failure).
int cli_main(int argc, const char* const* argv);

} // namespace snv
