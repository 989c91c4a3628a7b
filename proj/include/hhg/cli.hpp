#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hhg/io.hpp"
#include "hhg/tls.hpp"

namespace hhg {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitValidation = 2,
    kExitRuntime = 3,
};

/// Runs one `hhgsim <subcommand> ...` invocation. Output files go where the config (or
/// --out-dir / --prefix) says; messages go to `out`, diagnostics to `err`.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// For each distinct e_peak, the most prominent peak on each side of omega_d whose
/// offset |omega - omega_d| lies in [min_offset, max_offset]. `side` is "upper", "lower" or "both".
std::vector<DipoleFitPoint> sideband_points(std::span<const PeakRecord> records, double omega_d, double min_offset,
                                            double max_offset, const std::string& side = "both");

}  // namespace hhg
