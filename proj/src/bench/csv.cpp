#include "lfc/bench/csv.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lfc::bench {

void write_csv(std::ostream& out, const std::vector<TrialRow>& rows) {
  out << kCsvHeader << '\n';
  for (const TrialRow& r : rows) {
    out << r.impl << ',' << r.objects << ',' << r.workload << ',' << r.threads
        << ',' << r.contention << ',' << r.backoff << ',' << r.trial << ','
        << r.elapsed_ns << ',' << r.retries << ',' << r.helper_writes << '\n';
  }
}

std::vector<TrialRow> read_csv(std::istream& in) {
  std::vector<TrialRow> rows;
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("csv: missing or unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    TrialRow r;
    std::string field;
    auto next = [&](std::string& dst) {
      if (!std::getline(ls, dst, ','))
        throw std::runtime_error("csv: short row: " + line);
    };
    next(r.impl);
    next(r.objects);
    next(r.workload);
    next(field);
    r.threads = static_cast<unsigned>(std::stoul(field));
    next(r.contention);
    next(r.backoff);
    next(field);
    r.trial = static_cast<unsigned>(std::stoul(field));
    next(field);
    r.elapsed_ns = std::stoull(field);
    next(field);
    r.retries = std::stoull(field);
    next(field);
    r.helper_writes = std::stoull(field);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace lfc::bench
