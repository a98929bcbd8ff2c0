#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "lfc/cell.hpp"

// History recorder and brute-force linearizability checker.
//
// Recording is wait-free on the workload side: each recorder-registered
// thread appends to its own preallocated buffer, and a global counter
// hands out sequence numbers. The checker searches for a total order of
// completed operations that respects real-time precedence (response seq <
// invocation seq) and replays correctly on a deterministic sequential spec
// of the two containers, treating move as a single operation on the
// product machine.

namespace lfc::lincheck {

enum class OpCode : unsigned char { kInsert, kRemove, kMove };
enum class ContainerKind : unsigned char { kFifo, kLifo };

struct Event {
  std::uint64_t seq = 0;
  unsigned thread = 0;
  bool is_response = false;
  OpCode op = OpCode::kInsert;
  unsigned char obj = 0;   // source object for move
  unsigned char obj2 = 0;  // target object for move
  word arg = 0;            // insert argument
  bool ok = false;         // response payload
  word value = 0;          // remove response payload
};

bool operator==(const Event& a, const Event& b);

struct Operation {
  OpCode op = OpCode::kInsert;
  unsigned char obj = 0;
  unsigned char obj2 = 0;
  word arg = 0;
  bool ok = false;
  word value = 0;
  std::uint64_t inv_seq = 0;
  std::uint64_t resp_seq = 0;
  unsigned thread = 0;
};

class Recorder {
 public:
  explicit Recorder(unsigned max_threads,
                    std::size_t capacity_per_thread = 1 << 14);

  // Claims a recorder-local thread index.
  unsigned register_thread();

  void invoke(unsigned thread, OpCode op, unsigned obj, unsigned obj2,
              word arg);
  void respond(unsigned thread, OpCode op, unsigned obj, unsigned obj2,
               bool ok, word value);

  // All events merged in seq order; call only at quiescence.
  std::vector<Event> merged() const;

  // Pairs invocations with responses; throws if any operation is pending
  // or per-thread alternation is violated.
  static std::vector<Operation> pair(const std::vector<Event>& events);

  // Plain text history: one event per line, `seq thread kind op arg result`.
  static void write(std::ostream& out, const std::vector<Event>& events);
  static std::vector<Event> parse(std::istream& in);

 private:
  struct Buffer {
    std::vector<Event> events;
  };
  std::vector<Buffer> buffers_;
  std::size_t capacity_;
  std::atomic<unsigned> next_thread_{0};
  std::atomic<std::uint64_t> next_seq_{0};
};

// Deterministic sequential machine for two containers and the move
// between them.
struct ProductSpec {
  std::array<ContainerKind, 2> kind;

  using State = std::array<std::vector<word>, 2>;

  // Replays op on state; false when the recorded result cannot follow.
  bool apply(State& state, const Operation& op) const;
};

enum class CheckOutcome { kLinearizable, kNotLinearizable, kTooLarge };

// Exhaustive search with memoized pruning. Histories beyond max_ops or the
// node budget report kTooLarge, never a silent pass.
CheckOutcome check(const std::vector<Operation>& ops, const ProductSpec& spec,
                   std::size_t max_ops = 20,
                   std::size_t node_budget = 4'000'000);

}  // namespace lfc::lincheck
