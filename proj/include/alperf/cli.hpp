#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace alperf {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2 };

/// Entry point of the `alperf` tool. `args` excludes the program name.
///
///   run --config <file> --out <dir> [--seed N] [--workers N]
///   report <raw.csv> --out <summary.json>
///   plot <raw.csv> --out <figure.svg>
///   scenarios [--show NAME]
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace alperf
