#pragma once

#include <atomic>
#include <cstdint>

#include "lfc/cell.hpp"
#include "lfc/pool.hpp"
#include "lfc/runtime.hpp"

// Lock-free two-word compare-and-swap with helping.
//
// An initiator announces the operation by swinging the first target cell
// from old1 to a descriptor reference; any thread that meets the
// descriptor through read() helps drive it to completion. The second cell
// receives the descriptor marked with the acting thread's id, which both
// defeats ABA on the second word and arbitrates (through the shared `res`
// word) which helper's install commits. `res` moves monotonically:
// UNDECIDED -> SECONDFAILED, or UNDECIDED -> <marked descriptor> ->
// SUCCESS.

namespace lfc {

enum class DcasResult : unsigned char {
  kSuccess = 0,
  kFirstFailed,
  kSecondFailed,
};

inline constexpr word kResUndecided = 0;
inline constexpr word kResSecondFailed = 1;
inline constexpr word kResSuccess = 2;

// The announcement record. Non-res fields are written by the initiator
// before the descriptor becomes visible and are immutable afterwards.
// old/new values are always plain (never descriptor-tagged) words.
// hp1/hp2 carry the values the initiator protected so helpers can publish
// the same protections before touching the cells.
struct DcasDescriptor {
  AtomicCell* ptr1 = nullptr;
  AtomicCell* ptr2 = nullptr;
  word old1 = 0;
  word old2 = 0;
  word new1 = 0;
  word new2 = 0;
  word hp1 = 0;
  word hp2 = 0;
  AtomicCell res{kResUndecided};

  // True once the announce CAS succeeded; decides retire-vs-reuse.
  bool announced = false;

  // Instrumentation; asserted by the stress suites, reported by bench.
  std::atomic<std::uint32_t> new1_writes{0};
  std::atomic<std::uint32_t> p2set_installs{0};
  std::atomic<word> first_result{0};  // 0 = unset, else DcasResult + 1
};

static_assert(sizeof(DcasDescriptor) <= pool::kMaxPayloadSize);

inline word announce_word(const DcasDescriptor* d) {
  return mark(reinterpret_cast<word>(d), 0);
}

inline DcasDescriptor* descriptor_of(word v) {
  return reinterpret_cast<DcasDescriptor*>(unmark(v));
}

DcasDescriptor* make_descriptor(ThreadSlot& self);

// Fresh copy with res reset to UNDECIDED; the already-captured legs are
// preserved so an insert-side retry can reuse the remove leg.
DcasDescriptor* copy_descriptor(ThreadSlot& self, const DcasDescriptor& old);

// Retires an announced descriptor through the reclamation pipeline; a
// descriptor that never became visible returns straight to the pool.
void dispose_descriptor(ThreadSlot& self, DcasDescriptor* d);

// Algorithm core. `desc_word` is the tagged descriptor word: the announce
// form for the initiator, the value read from a cell for helpers. Helpers
// adopt the initiator's protection payloads before touching the cells.
DcasResult dcas(word desc_word, bool initiator, ThreadSlot& self);

// Descriptor-aware load: returns a plain (untagged) cell value, helping
// any in-flight DCAS met along the way to completion first.
word read(AtomicCell& cell, ThreadSlot& self);

inline word read(AtomicCell& cell) { return read(cell, this_slot()); }

}  // namespace lfc
