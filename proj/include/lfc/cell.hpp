#pragma once

#include <atomic>
#include <cassert>
#include <cstddef>
#include <cstdint>

// Shared atomic cells and the tagged-word encoding.
//
// A cell holds one machine word which is either null, a plain node
// reference, or a descriptor reference tagged in the low bits. Low bits
// are free for tagging because every pooled allocation is aligned to
// kCellAlign. Bit 0 flags a descriptor; bits 1..kThreadIdBits carry the
// helper thread id (0 = the untagged announce form used in the first
// target word).

namespace lfc {

using word = std::uintptr_t;

inline constexpr unsigned kThreadIdBits = 6;
inline constexpr unsigned kTagBits = 1 + kThreadIdBits;
inline constexpr word kDescriptorBit = word{1};
inline constexpr word kThreadIdMask = ((word{1} << kThreadIdBits) - 1) << 1;
inline constexpr word kTagMask = (word{1} << kTagBits) - 1;
inline constexpr std::size_t kCellAlign = std::size_t{1} << kTagBits;

// Usable helper ids are 1..kMaxThreadId; id 0 is reserved for the
// untagged form.
inline constexpr unsigned kMaxThreadId = (1u << kThreadIdBits) - 1;
static_assert(kMaxThreadId >= 16, "must cover at least 16 worker threads");

constexpr bool is_descriptor(word v) { return (v & kDescriptorBit) != 0; }

constexpr unsigned thread_of(word v) {
  return static_cast<unsigned>((v & kThreadIdMask) >> 1);
}

// Strips all tag bits, leaving the referent address.
constexpr word unmark(word v) { return v & ~kTagMask; }

inline word mark(word descriptor_base, unsigned thread_id) {
  assert((descriptor_base & kTagMask) == 0 && "descriptor must be aligned");
  assert(thread_id <= kMaxThreadId);
  return descriptor_base | (word{thread_id} << 1) | kDescriptorBit;
}

// One shared atomic cell. Everything in this project synchronizes through
// these; all accesses are sequentially consistent, no weaker ordering is
// used anywhere.
class AtomicCell {
 public:
  AtomicCell() noexcept = default;
  explicit AtomicCell(word v) noexcept : bits_(v) {}

  AtomicCell(const AtomicCell&) = delete;
  AtomicCell& operator=(const AtomicCell&) = delete;

  word load() const noexcept { return bits_.load(std::memory_order_seq_cst); }

  void store(word v) noexcept { bits_.store(v, std::memory_order_seq_cst); }

  // Single-word CAS: atomically installs `desired` iff the cell holds
  // `expected`.
  bool cas(word expected, word desired) noexcept {
    return bits_.compare_exchange_strong(expected, desired,
                                         std::memory_order_seq_cst,
                                         std::memory_order_seq_cst);
  }

  word exchange(word v) noexcept {
    return bits_.exchange(v, std::memory_order_seq_cst);
  }

 private:
  std::atomic<word> bits_{0};
};

static_assert(std::atomic<word>::is_always_lock_free,
              "requires native word-sized CAS");
static_assert(sizeof(AtomicCell) == sizeof(word));

}  // namespace lfc
