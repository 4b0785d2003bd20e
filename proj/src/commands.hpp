// Harness commands.  Each takes a parsed Options record, writes its output
// files under opts.out, and returns a small JSON summary (paths written plus
// headline numbers) for the caller to print or inspect.
#pragma once

#include <string>

#include "config.hpp"

namespace offtd {

std::string cmd_run(const Options& opts);
std::string cmd_sweep(const Options& opts);
std::string cmd_report(const Options& opts);
std::string cmd_oracle(const Options& opts);
std::string cmd_plotdata(const Options& opts);

// Dispatch by command name ("run", "sweep", "report", "oracle", "plotdata");
// throws std::invalid_argument on unknown names.
std::string run_command(const std::string& name, const Options& opts);

}  // namespace offtd
