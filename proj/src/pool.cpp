#include "lfc/pool.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <mutex>
#include <new>
#include <vector>

#ifndef LFC_POISON_CHECKS
#define LFC_POISON_CHECKS 1
#endif

namespace lfc::pool {

namespace {

// Block layout while pooled:
//   [0] next free block in the list
//   [1] next chunk on the global stack (chunk heads only)
//   [2] block count of the chunk (chunk heads only)
//   [3..13] poison
//   [14] poison (last payload word)
//   [15] state word
inline constexpr std::size_t kListLinkIndex = 0;
inline constexpr std::size_t kChunkLinkIndex = 1;
inline constexpr std::size_t kChunkCountIndex = 2;
inline constexpr std::size_t kPoisonFirst = 3;
inline constexpr std::size_t kPoisonLast = kStateWordIndex - 1;

word* words(void* block) { return static_cast<word*>(block); }
const word* words(const void* block) { return static_cast<const word*>(block); }

struct GlobalPool {
  AtomicCell chunk_top;
  std::atomic<std::uint64_t> os_blocks{0};
  std::atomic<std::uint64_t> outstanding{0};
  std::atomic<std::uint64_t> pooled_global{0};

  std::mutex registry_mu;
  std::vector<void*> os_registry;

  ~GlobalPool() {
    for (void* b : os_registry) std::free(b);
  }
};

GlobalPool& global(PoolClass cls) {
  static GlobalPool pools[kPoolClassCount];
  return pools[cls];
}

void poison(word* w) {
#if LFC_POISON_CHECKS
  for (std::size_t i = kPoisonFirst; i <= kPoisonLast; ++i)
    w[i] = kPoisonPattern;
#else
  (void)w;
#endif
}

void check_poison(const word* w) {
#if LFC_POISON_CHECKS
  for (std::size_t i = kPoisonFirst; i <= kPoisonLast; ++i)
    assert(w[i] == kPoisonPattern && "pooled block was written after reclaim");
#else
  (void)w;
#endif
}

void push_chunk(GlobalPool& g, word chunk) {
  for (;;) {
    word cur = g.chunk_top.load();
    words(reinterpret_cast<void*>(chunk))[kChunkLinkIndex] = cur;
    if (g.chunk_top.cas(cur, chunk)) return;
  }
}

// Moves a reclaimed block onto the local list, spilling a full list to the
// global stack first.
void push_local(ThreadSlot& self, PoolClass cls, void* block) {
  LocalFreeList& fl = self.free_lists[cls];
  if (fl.count == kLocalListCapacity) flush_local(self, cls);
  words(block)[kListLinkIndex] = fl.head;
  fl.head = reinterpret_cast<word>(block);
  fl.count++;
}

void to_pool(ThreadSlot& self, PoolClass cls, void* block) {
  word* w = words(block);
  poison(w);
  w[kStateWordIndex] = kStatePooled;
  push_local(self, cls, block);
  global(cls).outstanding.fetch_sub(1);
}

void* os_alloc(PoolClass cls) {
  void* b = std::aligned_alloc(kCellAlign, kBlockSize);
  if (!b) throw std::bad_alloc();
  GlobalPool& g = global(cls);
  {
    std::lock_guard<std::mutex> lk(g.registry_mu);
    g.os_registry.push_back(b);
  }
  g.os_blocks.fetch_add(1);
  return b;
}

// Grab-all refill: exchanging the whole stack out sidesteps the ABA race a
// plain pop would have on recycled chunk heads; the chunks we do not keep
// are pushed straight back.
bool refill_from_global(ThreadSlot& self, PoolClass cls) {
  GlobalPool& g = global(cls);
  word all = g.chunk_top.exchange(0);
  if (all == 0) return false;
  void* keep = reinterpret_cast<void*>(all);
  word rest = words(keep)[kChunkLinkIndex];
  while (rest != 0) {
    word next = words(reinterpret_cast<void*>(rest))[kChunkLinkIndex];
    push_chunk(g, rest);
    rest = next;
  }
  LocalFreeList& fl = self.free_lists[cls];
  assert(fl.count == 0);
  fl.head = all;
  fl.count = static_cast<std::uint32_t>(words(keep)[kChunkCountIndex]);
  words(keep)[kChunkLinkIndex] = kPoisonPattern;
  words(keep)[kChunkCountIndex] = kPoisonPattern;
  g.pooled_global.fetch_sub(fl.count);
  return true;
}

std::size_t scan_threshold() {
  unsigned p = registry().registered_count();
  if (p == 0) p = 1;
  std::size_t t = std::size_t{2} * kHazardSlotsPerThread * p;
  return std::min(t, kRetiredCapacity - 1);
}

}  // namespace

void flush_local(ThreadSlot& self, PoolClass cls) {
  LocalFreeList& fl = self.free_lists[cls];
  if (fl.count == 0) return;
  void* chunk = reinterpret_cast<void*>(fl.head);
  words(chunk)[kChunkCountIndex] = fl.count;
  global(cls).pooled_global.fetch_add(fl.count);
  push_chunk(global(cls), fl.head);
  fl.head = 0;
  fl.count = 0;
}

void* alloc_block(ThreadSlot& self, PoolClass cls) {
  LocalFreeList& fl = self.free_lists[cls];
  if (fl.count == 0) refill_from_global(self, cls);
  GlobalPool& g = global(cls);
  void* block;
  if (fl.count > 0) {
    block = reinterpret_cast<void*>(fl.head);
    fl.head = words(block)[kListLinkIndex];
    fl.count--;
    word* w = words(block);
    assert(w[kStateWordIndex] == kStatePooled);
    check_poison(w);
  } else {
    block = os_alloc(cls);
  }
  // Alignment keeps every tag bit of a block reference zero; a plain
  // reference must never look like a descriptor.
  assert((reinterpret_cast<word>(block) & kTagMask) == 0);
  words(block)[kStateWordIndex] = kStateLive;
  g.outstanding.fetch_add(1);
  return block;
}

void retire_block(ThreadSlot& self, void* block, PoolClass cls) {
  word* w = words(block);
  assert(w[kStateWordIndex] != kStateRetired && "double retire");
  assert(w[kStateWordIndex] == kStateLive && "retire of non-live block");
  w[kStateWordIndex] = kStateRetired;
  assert(self.retired_count < kRetiredCapacity);
  self.retired[self.retired_count++] = {reinterpret_cast<word>(block), cls};
  if (self.retired_count >= scan_threshold()) scan(self);
}

void release_unshared_block(ThreadSlot& self, void* block, PoolClass cls) {
  word* w = words(block);
  assert(w[kStateWordIndex] == kStateLive);
  to_pool(self, cls, block);
}

void scan(ThreadSlot& self) {
  if (self.retired_count == 0) return;

  word protected_addrs[kSlotCount * kHazardSlotsPerThread];
  std::size_t n = 0;
  Registry& reg = registry();
  for (unsigned id = 0; id < kSlotCount; ++id) {
    ThreadSlot& s = reg.slot(id);
    for (auto& h : s.hazards) {
      word v = h.load(std::memory_order_seq_cst);
      if (v != 0) protected_addrs[n++] = unmark(v);
    }
  }
  std::sort(protected_addrs, protected_addrs + n);

  std::size_t kept = 0;
  for (std::size_t i = 0; i < self.retired_count; ++i) {
    RetiredEntry e = self.retired[i];
    bool live_ref = std::binary_search(protected_addrs, protected_addrs + n,
                                       e.block);
    if (live_ref) {
      self.retired[kept++] = e;
    } else {
      to_pool(self, static_cast<PoolClass>(e.pool_class),
              reinterpret_cast<void*>(e.block));
    }
  }
  self.retired_count = kept;
}

bool block_accessible(const void* payload) {
  word s = words(payload)[kStateWordIndex];
  // Retired-but-protected blocks remain legal to read until reclaimed.
  return s == kStateLive || s == kStateRetired;
}

PoolStats stats(PoolClass cls) {
  GlobalPool& g = global(cls);
  PoolStats st;
  st.os_blocks = g.os_blocks.load();
  st.outstanding = g.outstanding.load();
  st.pooled_global = g.pooled_global.load();
  Registry& reg = registry();
  for (unsigned id = 0; id < kSlotCount; ++id)
    st.pooled_local += reg.slot(id).free_lists[cls].count;
  return st;
}

}  // namespace lfc::pool
