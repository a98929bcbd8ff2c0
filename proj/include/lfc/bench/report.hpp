#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lfc/bench/csv.hpp"

namespace lfc::bench {

// Median of a sample; for an even count, the average of the two middle
// values. Throws on an empty sample.
std::uint64_t median_ns(std::vector<std::uint64_t> values);

struct GroupSummary {
  std::string impl, objects, workload, contention, backoff;
  unsigned threads = 0;
  unsigned trials = 0;
  std::uint64_t median_elapsed_ns = 0;
  std::uint64_t min_elapsed_ns = 0;
  std::uint64_t max_elapsed_ns = 0;
  std::uint64_t total_retries = 0;
  std::uint64_t total_helper_writes = 0;
};

// Per-configuration medians and spread. Throws std::invalid_argument when
// rows is empty.
std::vector<GroupSummary> summarize(const std::vector<TrialRow>& rows);

void print_summary(std::ostream& out, const std::vector<GroupSummary>& groups);

}  // namespace lfc::bench
