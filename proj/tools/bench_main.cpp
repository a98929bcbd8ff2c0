#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <thread>

#include "lfc/bench/report.hpp"
#include "lfc/bench/runner.hpp"

// Benchmark harness for the two-container move workloads: seeds a pair of
// containers, drives move / insert / remove mixes across worker threads
// with calibrated local work between operations, and reports wall time
// with the local work subtracted. Every trial is also a correctness run:
// element conservation is verified before a row is emitted, and any
// violation exits nonzero.

int main(int argc, char** argv) {
  CLI::App app{"two-container move benchmark"};

  std::string objects = "qq";
  std::string workload = "move";
  std::string contention = "high";
  std::string backoff = "off";
  std::string impl = "both";
  std::string csv_path;
  unsigned threads = 0;  // 0: sweep 1..min(8, cores)
  bool paper_scale = false;

  lfc::bench::BenchConfig cfg;

  app.add_option("--objects", objects, "container pairing: qq | ss | qs")
      ->capture_default_str();
  app.add_option("--workload", workload, "workload: move | ops | mixed")
      ->capture_default_str();
  app.add_option("--threads", threads,
                 "worker thread count (default: sweep 1..min(8, cores))");
  app.add_option("--ops", cfg.total_ops, "operations per trial")
      ->capture_default_str();
  app.add_option("--trials", cfg.trials, "trials per configuration")
      ->capture_default_str();
  app.add_option("--contention", contention, "local work level: high | low")
      ->capture_default_str();
  app.add_option("--backoff", backoff, "exponential backoff: on | off")
      ->capture_default_str();
  app.add_option("--impl", impl, "implementations: lockfree | locked | both")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  app.add_option("--csv", csv_path, "write per-trial rows to this CSV file");
  app.add_option("--seed-elements", cfg.seed_elements,
                 "elements preloaded into each container")
      ->capture_default_str();
  app.add_option("--backoff-initial", cfg.backoff_initial_ns,
                 "initial backoff wait (ns)")
      ->capture_default_str();
  app.add_option("--backoff-max", cfg.backoff_max_ns, "backoff wait cap (ns)")
      ->capture_default_str();
  app.add_flag("--paper-scale", paper_scale,
               "full experimental design: 5M ops, 50 trials, threads 1..16");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.objects = lfc::bench::objects_from_string(objects);
    cfg.workload = lfc::bench::workload_from_string(workload);
    cfg.contention = lfc::bench::contention_from_string(contention);
    cfg.impl = lfc::bench::impl_from_string(impl);
    if (backoff == "on")
      cfg.backoff = true;
    else if (backoff == "off")
      cfg.backoff = false;
    else
      throw std::invalid_argument("bench: --backoff must be on or off");

    unsigned cores = std::max(1u, std::thread::hardware_concurrency());
    if (paper_scale) {
      cfg.total_ops = 5'000'000;
      cfg.trials = 50;
    }
    if (threads != 0) {
      cfg.thread_counts = {threads};
    } else {
      unsigned top = paper_scale ? 16u : std::min(8u, cores);
      cfg.thread_counts.clear();
      for (unsigned t = 1; t <= top; ++t) cfg.thread_counts.push_back(t);
    }
    cfg.validate();

    for (unsigned t : cfg.thread_counts)
      if (t > cores)
        std::cout << "note: " << t << " threads exceed the " << cores
                  << " logical cores on this host\n";

    auto rows = lfc::bench::run(cfg, &std::cout);
    lfc::bench::print_summary(std::cout, lfc::bench::summarize(rows));

    if (!csv_path.empty()) {
      std::ofstream out(csv_path);
      if (!out) throw std::runtime_error("cannot open " + csv_path);
      lfc::bench::write_csv(out, rows);
      std::cout << "wrote " << rows.size() << " rows to " << csv_path << '\n';
    }
  } catch (const lfc::bench::ConservationError& e) {
    std::cerr << "correctness violation: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
