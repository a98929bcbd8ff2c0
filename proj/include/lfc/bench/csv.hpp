#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lfc::bench {

// One row per (implementation, configuration, trial).
struct TrialRow {
  std::string impl;       // lockfree | locked
  std::string objects;    // qq | ss | qs
  std::string workload;   // move | ops | mixed
  unsigned threads = 0;
  std::string contention;  // high | low
  std::string backoff;     // on | off
  unsigned trial = 0;
  std::uint64_t elapsed_ns = 0;  // wall time minus local work
  std::uint64_t retries = 0;
  std::uint64_t helper_writes = 0;

  bool operator==(const TrialRow&) const = default;
};

inline constexpr const char* kCsvHeader =
    "impl,objects,workload,threads,contention,backoff,trial,elapsed_ns,"
    "retries,helper_writes";

void write_csv(std::ostream& out, const std::vector<TrialRow>& rows);
std::vector<TrialRow> read_csv(std::istream& in);

}  // namespace lfc::bench
