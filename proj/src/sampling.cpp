#include "pairstream/sampling.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pairstream {

Policy policy_from_string(const std::string& name) {
    if (name == "fifo") return Policy::Fifo;
    if (name == "rs") return Policy::Rs;
    if (name == "rsx") return Policy::Rsx;
    if (name == "rsx2") return Policy::Rsx2;
    throw std::invalid_argument("unknown policy: " + name);
}

std::string to_string(Policy policy) {
    switch (policy) {
        case Policy::Fifo: return "fifo";
        case Policy::Rs: return "rs";
        case Policy::Rsx: return "rsx";
        case Policy::Rsx2: return "rsx2";
    }
    throw std::logic_error("bad policy enum");
}

Buffer::Buffer(Policy policy, std::size_t capacity) : policy_(policy), capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("buffer capacity must be positive");
    entries_.reserve(capacity);
}

AuxRecord Buffer::repopulate(const LabeledPoint& z, RandomSource& rng) {
    // TMP holds the s current entries followed by the incoming point.
    AuxRecord rec;
    std::vector<BufferEntry> tmp = entries_;
    tmp.push_back(BufferEntry{z, steps_seen_ + 1});
    std::vector<BufferEntry> fresh;
    fresh.reserve(capacity_);
    for (std::size_t j = 0; j < capacity_; ++j) {
        const std::size_t pick = rng.next_bounded(tmp.size());
        ++rec.index_draws;
        if (pick == tmp.size() - 1) rec.replaced_slots.push_back(j);
        fresh.push_back(tmp[pick]);
    }
    entries_ = std::move(fresh);
    return rec;
}

AuxRecord Buffer::update(const LabeledPoint& z, std::size_t t, RandomSource* rng) {
    if (t != steps_seen_ + 1) throw std::invalid_argument("step mismatch");
    if (policy_ != Policy::Fifo && rng == nullptr)
        throw std::invalid_argument("randomized policy needs a RandomSource");

    AuxRecord rec;
    rec.step = t;
    const std::size_t s = capacity_;

    if (entries_.size() < s) {
        entries_.push_back(BufferEntry{z, t});
        rec.appended = true;
        ++steps_seen_;
        return rec;
    }

    switch (policy_) {
        case Policy::Fifo:
            entries_.erase(entries_.begin());
            entries_.push_back(BufferEntry{z, t});
            rec.replaced_slots.push_back(s - 1);
            break;
        case Policy::Rs: {
            ++rec.bernoulli_draws;
            if (rng->bernoulli(static_cast<double>(s) / static_cast<double>(t))) {
                const std::size_t slot = rng->next_bounded(s);
                ++rec.index_draws;
                entries_[slot] = BufferEntry{z, t};
                rec.replaced_slots.push_back(slot);
            }
            break;
        }
        case Policy::Rsx: {
            if (t == s + 1) {
                rec = repopulate(z, *rng);
                rec.step = t;
                break;
            }
            const double p = 1.0 / static_cast<double>(t);
            for (std::size_t j = 0; j < s; ++j) {
                ++rec.bernoulli_draws;
                if (rng->bernoulli(p)) {
                    entries_[j] = BufferEntry{z, t};
                    rec.replaced_slots.push_back(j);
                }
            }
            break;
        }
        case Policy::Rsx2: {
            if (t == s + 1) {
                rec = repopulate(z, *rng);
                rec.step = t;
                break;
            }
            const double p = 1.0 / static_cast<double>(t);
            std::size_t k = 0;
            for (std::size_t j = 0; j < s; ++j)
                if (rng->bernoulli(p)) ++k;
            rec.binomial_draws = 1;
            // First k positions of a random permutation of the slot indices.
            std::vector<std::size_t> order(s);
            std::iota(order.begin(), order.end(), std::size_t{0});
            for (std::size_t j = 0; j < k; ++j) {
                const std::size_t m = j + rng->next_bounded(s - j);
                ++rec.index_draws;
                std::swap(order[j], order[m]);
                entries_[order[j]] = BufferEntry{z, t};
                rec.replaced_slots.push_back(order[j]);
            }
            break;
        }
    }
    ++steps_seen_;
    return rec;
}

namespace {

AuxRecord checked_update(Buffer& buf, Policy expected, const LabeledPoint& z, std::size_t t,
                         RandomSource* rng) {
    if (buf.policy() != expected)
        throw std::invalid_argument("buffer policy does not match update function");
    return buf.update(z, t, rng);
}

}  // namespace

AuxRecord update_fifo(Buffer& buf, const LabeledPoint& z, std::size_t t) {
    return checked_update(buf, Policy::Fifo, z, t, nullptr);
}

AuxRecord update_rs(Buffer& buf, const LabeledPoint& z, std::size_t t, RandomSource& rng) {
    return checked_update(buf, Policy::Rs, z, t, &rng);
}

AuxRecord update_rsx(Buffer& buf, const LabeledPoint& z, std::size_t t, RandomSource& rng) {
    return checked_update(buf, Policy::Rsx, z, t, &rng);
}

AuxRecord update_rsx2(Buffer& buf, const LabeledPoint& z, std::size_t t, RandomSource& rng) {
    return checked_update(buf, Policy::Rsx2, z, t, &rng);
}

double replacement_pattern_probability(std::size_t s, std::size_t t, std::size_t k) {
    if (k > s) throw std::invalid_argument("pattern weight k exceeds buffer size");
    if (t <= s) throw std::invalid_argument("pattern law requires t > s");
    const double p = 1.0 / static_cast<double>(t);
    return std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(s - k));
}

}  // namespace pairstream
