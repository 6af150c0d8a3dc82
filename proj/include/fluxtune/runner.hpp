#ifndef FLUXTUNE_RUNNER_HPP
#define FLUXTUNE_RUNNER_HPP

#include "fluxtune/config.hpp"
#include "fluxtune/table.hpp"

#include <string>

namespace fluxtune {

/// Number of sweep workers: hardware concurrency, capped by the
/// FLUXTUNE_THREADS environment variable when set (always >= 1).
int worker_count();

/// Executes one CLI subcommand (derive | validate | schedule | spectrum |
/// couplings | noise) and returns its result table, provenance included.
/// Throws std::invalid_argument for unknown subcommands and propagates
/// computation errors with row context.
ResultTable run_subcommand(const std::string& name, const RunConfig& config);

} // namespace fluxtune

#endif
