#include "lfc/bench/report.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace lfc::bench {

std::uint64_t median_ns(std::vector<std::uint64_t> values) {
  if (values.empty()) throw std::invalid_argument("median of empty sample");
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2;
}

std::vector<GroupSummary> summarize(const std::vector<TrialRow>& rows) {
  if (rows.empty())
    throw std::invalid_argument("report: no completed trials to summarize");

  using Key = std::tuple<std::string, std::string, std::string, std::string,
                         std::string, unsigned>;
  std::map<Key, std::vector<const TrialRow*>> groups;
  for (const TrialRow& r : rows)
    groups[{r.impl, r.objects, r.workload, r.contention, r.backoff, r.threads}]
        .push_back(&r);

  std::vector<GroupSummary> out;
  for (auto& [key, members] : groups) {
    GroupSummary g;
    std::tie(g.impl, g.objects, g.workload, g.contention, g.backoff,
             g.threads) = key;
    std::vector<std::uint64_t> elapsed;
    for (const TrialRow* r : members) {
      elapsed.push_back(r->elapsed_ns);
      g.total_retries += r->retries;
      g.total_helper_writes += r->helper_writes;
    }
    g.trials = static_cast<unsigned>(members.size());
    g.median_elapsed_ns = median_ns(elapsed);
    g.min_elapsed_ns = *std::min_element(elapsed.begin(), elapsed.end());
    g.max_elapsed_ns = *std::max_element(elapsed.begin(), elapsed.end());
    out.push_back(std::move(g));
  }
  return out;
}

void print_summary(std::ostream& out,
                   const std::vector<GroupSummary>& groups) {
  out << "impl      objects workload threads contention backoff trials"
      << "   median_ms      min_ms      max_ms     retries helper_writes\n";
  for (const GroupSummary& g : groups) {
    out << std::left << std::setw(10) << g.impl << std::setw(8) << g.objects
        << std::setw(9) << g.workload << std::right << std::setw(7)
        << g.threads << ' ' << std::left << std::setw(10) << g.contention
        << ' ' << std::setw(7) << g.backoff << std::right << std::setw(7)
        << g.trials << std::fixed << std::setprecision(3) << std::setw(12)
        << g.median_elapsed_ns / 1e6 << std::setw(12) << g.min_elapsed_ns / 1e6
        << std::setw(12) << g.max_elapsed_ns / 1e6 << std::setw(12)
        << g.total_retries << std::setw(14) << g.total_helper_writes << '\n';
  }
}

}  // namespace lfc::bench
