#pragma once

#include <atomic>
#include <cstdint>
#include <cstddef>

#include "lfc/cell.hpp"

// Per-thread runtime state: registration slots, hazard (protection)
// records, retired lists, pool caches and the in-flight move context.
//
// Threads must register before touching any container. A slot id doubles
// as the thread id encoded into marked descriptor words, so at most
// kMaxThreadId threads can be registered at once. Slots are recycled when
// a thread deregisters; leftover retired blocks are inherited by the next
// owner and swept out by its scans.

namespace lfc {

struct DcasDescriptor;

// Protection slot layout. The queue uses separate slots for enqueue and
// dequeue so a move composed of the two never overwrites its own
// protections. kHzHelpFirst/kHzHelpSecond receive the initiator's payloads
// when helping a DCAS; they are distinct from the operation slots for the
// same reason.
enum HazardIndex : unsigned {
  kHzEnqueueTail = 0,
  kHzEnqueueNext,
  kHzDequeueHead,
  kHzDequeueNext,
  kHzStackTop,
  kHzDescriptor,
  kHzHelpFirst,
  kHzHelpSecond,
  kHazardSlotsPerThread,
};

enum PoolClass : unsigned {
  kPoolNodes = 0,
  kPoolDescriptors = 1,
  kPoolClassCount,
};

inline constexpr unsigned kSlotCount = kMaxThreadId + 1;  // index == thread id

// Free blocks are chained through their first word.
struct LocalFreeList {
  word head = 0;
  std::uint32_t count = 0;
};

struct RetiredEntry {
  word block = 0;
  unsigned pool_class = 0;
};

// Upper bound on a thread's retired-pending list. A scan can leave at most
// kHazardSlotsPerThread * kSlotCount entries protected, so the list can
// never saturate.
inline constexpr std::size_t kRetiredCapacity =
    std::size_t{2} * kHazardSlotsPerThread * kSlotCount;

enum class MoveFailure : unsigned char {
  kNone = 0,
  kSourceEmpty,
  kTargetRejected,
};

// Thread-local state of an in-flight move. `desc` is non-null exactly
// while a move is running on the owning thread; the scas hooks consult it
// to decide between plain-CAS and composed behavior.
struct MoveContext {
  DcasDescriptor* desc = nullptr;
  void* target = nullptr;
  bool (*insert_fn)(void* target, word element) = nullptr;
  word source_key = 0;
  word target_key = 0;
  bool insfailed = false;
  MoveFailure failure = MoveFailure::kNone;
};

struct ThreadStats {
  std::uint64_t retries = 0;        // failed linearization attempts retried
  std::uint64_t helper_writes = 0;  // successful cell writes while helping
  std::uint64_t insert_aborts = 0;  // in-move inserts that freed their node
};

struct alignas(2 * kCellAlign) ThreadSlot {
  std::atomic<bool> in_use{false};
  unsigned id = 0;

  std::atomic<word> hazards[kHazardSlotsPerThread] = {};

  LocalFreeList free_lists[kPoolClassCount];

  RetiredEntry retired[kRetiredCapacity];
  std::size_t retired_count = 0;

  MoveContext move;
  ThreadStats stats;

  void publish(unsigned slot, word v) noexcept {
    hazards[slot].store(v, std::memory_order_seq_cst);
  }
  void clear(unsigned slot) noexcept {
    hazards[slot].store(0, std::memory_order_seq_cst);
  }
};

class Registry {
 public:
  // Claims a free slot for the calling thread. Throws std::runtime_error
  // when all kMaxThreadId slots are taken: thread registration is a
  // configuration-time concern, never a runtime failure mode.
  ThreadSlot& acquire();

  // Releases the calling thread's slot. Clears its protections and flushes
  // what the final scan can free; still-protected retired blocks stay on
  // the slot for the next owner.
  void release(ThreadSlot& slot);

  unsigned registered_count() const {
    return registered_.load(std::memory_order_seq_cst);
  }

  ThreadSlot& slot(unsigned id) { return slots_[id]; }
  static constexpr unsigned slot_count() { return kSlotCount; }

 private:
  ThreadSlot slots_[kSlotCount];
  std::atomic<unsigned> registered_{0};
};

Registry& registry();

// The calling thread's slot; the thread must be registered.
ThreadSlot& this_slot();
bool thread_registered();

// RAII registration for a worker or test thread.
class ThreadGuard {
 public:
  ThreadGuard();
  ~ThreadGuard();
  ThreadGuard(const ThreadGuard&) = delete;
  ThreadGuard& operator=(const ThreadGuard&) = delete;

  ThreadSlot& slot() { return slot_; }

 private:
  ThreadSlot& slot_;
};

}  // namespace lfc
