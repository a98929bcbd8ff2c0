#pragma once

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "lfc/bench/config.hpp"
#include "lfc/bench/csv.hpp"

namespace lfc::bench {

// Raised when a trial's post-run multiset accounting does not balance.
// Correctness trumps timing: the harness never reports numbers from a
// trial that corrupted a container.
struct ConservationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Executes every (impl, thread count, trial) combination of the config.
// Each trial seeds fresh containers, runs the workload with per-op local
// work, subtracts the nominal work time from the wall time, and verifies
// element conservation before emitting its row. `log`, when set, receives
// one progress line per configuration.
std::vector<TrialRow> run(const BenchConfig& config, std::ostream* log = nullptr);

}  // namespace lfc::bench
