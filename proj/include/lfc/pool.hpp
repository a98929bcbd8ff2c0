#pragma once

#include <cstddef>
#include <cstdint>

#include "lfc/cell.hpp"
#include "lfc/runtime.hpp"

// Pooled block allocator with hazard-based reclamation.
//
// Every allocation is a fixed 128-byte block aligned to kCellAlign, so all
// node and descriptor references have zero low tag bits. Freed blocks go
// to a per-thread local list (capacity kLocalListCapacity); a full list is
// pushed onto a global lock-free stack of lists, and a thread whose local
// list runs dry grabs a list back from the global stack before falling
// through to the system allocator.
//
// retire() parks a block on the owning thread's retired-pending list; a
// scan sweeps entries whose address no other thread's protection slot
// covers back into the pool. Pooled payloads are poisoned and checked on
// reuse; block state words catch double retires and dereferences of
// reclaimed memory.

namespace lfc::pool {

inline constexpr std::size_t kBlockSize = 128;
inline constexpr std::uint32_t kLocalListCapacity = 200;

// Last word of every block tracks its lifecycle.
inline constexpr std::size_t kStateWordIndex = kBlockSize / sizeof(word) - 1;
inline constexpr std::size_t kMaxPayloadSize = kBlockSize - sizeof(word);

inline constexpr word kStateLive = 0xA11C0DE5'0000001FULL;
inline constexpr word kStateRetired = 0xA11C0DE5'000002EDULL;
inline constexpr word kStatePooled = 0xA11C0DE5'00000F2EULL;
inline constexpr word kPoisonPattern = 0xDEADD00D'DEADD00DULL;

void* alloc_block(ThreadSlot& self, PoolClass cls);

// Hands a block that was unlinked from all shared structures to the
// reclamation pipeline. It returns to a free list once no protection slot
// covers it. Double retire asserts.
void retire_block(ThreadSlot& self, void* block, PoolClass cls);

// Returns a block that was never visible to another thread straight to the
// local free list, bypassing the retired list.
void release_unshared_block(ThreadSlot& self, void* block, PoolClass cls);

// Sweeps this thread's retired-pending list against all protection slots.
// retire_block() triggers it automatically once the list reaches
// 2 * K * registered_threads entries.
void scan(ThreadSlot& self);

// Pushes any locally cached free blocks to the global stack (used on
// thread deregistration and by accounting tests).
void flush_local(ThreadSlot& self, PoolClass cls);

bool block_accessible(const void* payload);

struct PoolStats {
  std::uint64_t os_blocks = 0;     // blocks obtained from the system
  std::uint64_t outstanding = 0;   // live + retired-pending
  std::uint64_t pooled_local = 0;  // across all slots
  std::uint64_t pooled_global = 0;
};

PoolStats stats(PoolClass cls);

// Typed helpers: placement-construct into a pooled block.
template <class T, class... Args>
T* alloc(ThreadSlot& self, PoolClass cls, Args&&... args) {
  static_assert(sizeof(T) <= kMaxPayloadSize, "payload must fit a block");
  static_assert(alignof(T) <= kCellAlign);
  void* p = alloc_block(self, cls);
  return new (p) T(static_cast<Args&&>(args)...);
}

}  // namespace lfc::pool
