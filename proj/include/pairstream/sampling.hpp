#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pairstream/core.hpp"

namespace pairstream {

enum class Policy { Fifo, Rs, Rsx, Rsx2 };

Policy policy_from_string(const std::string& name);
std::string to_string(Policy policy);

struct BufferEntry {
    LabeledPoint point;
    std::size_t stream_index = 0;  // 1-based step at which the point arrived
};

// Auxiliary draws consumed by one buffer update, and where the incoming
// point landed. Counts are policy-level draws, not raw u64s: the Binomial
// used by RS-x^2 counts as one draw even though it is realized by s-fold
// Bernoulli summation internally.
struct AuxRecord {
    std::size_t step = 0;
    bool appended = false;
    std::vector<std::size_t> replaced_slots;  // slots now holding z_t
    std::uint32_t bernoulli_draws = 0;
    std::uint32_t index_draws = 0;
    std::uint32_t binomial_draws = 0;
};

using AuxTrace = std::vector<AuxRecord>;

// Capacity-bounded multiset of stream elements. All four policies admit
// unconditionally while there is space, so for t <= capacity the buffer is
// an exact in-order copy of the stream prefix. Updates are stream-oblivious:
// they read only the step index and the RandomSource, never feature or
// label values.
//
// Per-step draw order (buffer full, step t):
//   FIFO   no draws; evict the oldest element, append z_t.
//   RS     one Bernoulli(s/t); on success one uniform index in [0, s) whose
//          slot is overwritten by z_t.
//   RS-x   t == s+1: repopulation. TMP = slots + z_t (s+1 items, existing
//          slot order then z_t); each slot j = 0..s-1 is refilled by an
//          independent uniform index into TMP (s index draws).
//          t > s+1:  s Bernoulli(1/t) draws, slot 0 through slot s-1; each
//          success overwrites that slot with z_t.
//   RS-x^2 t == s+1: identical repopulation. t > s+1: k ~ Binomial(s, 1/t)
//          by s-fold Bernoulli summation, then k distinct slots chosen by a
//          partial Fisher-Yates over slot indices (k index draws), each
//          overwritten by z_t.
class Buffer {
public:
    Buffer(Policy policy, std::size_t capacity);

    Policy policy() const { return policy_; }
    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t steps_seen() const { return steps_seen_; }
    const std::vector<BufferEntry>& entries() const { return entries_; }

    // Applies this buffer's policy for step t; t must equal steps_seen()+1
    // or a "step mismatch" error is thrown. rng may be null for FIFO.
    AuxRecord update(const LabeledPoint& z, std::size_t t, RandomSource* rng);

private:
    AuxRecord repopulate(const LabeledPoint& z, RandomSource& rng);

    Policy policy_;
    std::size_t capacity_;
    std::vector<BufferEntry> entries_;
    std::size_t steps_seen_ = 0;
};

// Per-policy wrappers over Buffer::update; they reject a buffer whose
// policy tag does not match.
AuxRecord update_fifo(Buffer& buf, const LabeledPoint& z, std::size_t t);
AuxRecord update_rs(Buffer& buf, const LabeledPoint& z, std::size_t t, RandomSource& rng);
AuxRecord update_rsx(Buffer& buf, const LabeledPoint& z, std::size_t t, RandomSource& rng);
AuxRecord update_rsx2(Buffer& buf, const LabeledPoint& z, std::size_t t, RandomSource& rng);

// Probability of any fixed replacement pattern with k ones at a normal
// update step: (1/t)^k (1 - 1/t)^(s-k). Requires 0 <= k <= s and t > s.
double replacement_pattern_probability(std::size_t s, std::size_t t, std::size_t k);

}  // namespace pairstream
