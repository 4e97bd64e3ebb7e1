#pragma once

#include <string>
#include <vector>

namespace ssr::cli {

// Executes one pipeline subcommand (synth-scene, resample, synthesize-rgb,
// split-patches, train, infer, evaluate, signature). Returns the process
// exit code: 0 success, 1 validation/usage error, 2 runtime failure. Data
// goes to files only; diagnostics go to stderr.
int run(int argc, const char* const* argv);

// Same entry point for in-process callers; `args` excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace ssr::cli
