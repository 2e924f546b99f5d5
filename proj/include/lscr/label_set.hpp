#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace lscr {

using LabelId = std::uint32_t;

// Membership bit-vector over the edge-label universe (capped at 64 labels,
// so a set is one machine word and subset tests are single AND/CMP pairs).
class LabelSet {
public:
    static constexpr int kMaxLabels = 64;

    constexpr LabelSet() = default;

    static constexpr LabelSet from_bits(std::uint64_t bits) { return LabelSet(bits); }

    static constexpr LabelSet single(LabelId l) { return LabelSet(std::uint64_t{1} << l); }

    static LabelSet of(std::initializer_list<LabelId> ls) {
        LabelSet s;
        for (LabelId l : ls) s.add(l);
        return s;
    }

    // All labels below label_count.
    static constexpr LabelSet full(std::size_t label_count) {
        return LabelSet(label_count >= 64 ? ~std::uint64_t{0}
                                          : (std::uint64_t{1} << label_count) - 1);
    }

    constexpr bool contains(LabelId l) const { return (bits_ >> l) & 1u; }
    constexpr void add(LabelId l) { bits_ |= std::uint64_t{1} << l; }
    constexpr void remove(LabelId l) { bits_ &= ~(std::uint64_t{1} << l); }

    constexpr LabelSet with(LabelId l) const { return LabelSet(bits_ | (std::uint64_t{1} << l)); }

    constexpr bool empty() const { return bits_ == 0; }
    constexpr int count() const { return std::popcount(bits_); }
    constexpr std::uint64_t bits() const { return bits_; }

    constexpr bool subset_of(LabelSet other) const { return (bits_ & other.bits_) == bits_; }

    friend constexpr LabelSet operator|(LabelSet a, LabelSet b) { return LabelSet(a.bits_ | b.bits_); }
    friend constexpr LabelSet operator&(LabelSet a, LabelSet b) { return LabelSet(a.bits_ & b.bits_); }

    friend constexpr bool operator==(LabelSet a, LabelSet b) { return a.bits_ == b.bits_; }
    friend constexpr bool operator!=(LabelSet a, LabelSet b) { return a.bits_ != b.bits_; }
    friend constexpr bool operator<(LabelSet a, LabelSet b) { return a.bits_ < b.bits_; }

    std::vector<LabelId> labels() const {
        std::vector<LabelId> out;
        out.reserve(static_cast<std::size_t>(count()));
        for (std::uint64_t b = bits_; b;) {
            int i = std::countr_zero(b);
            out.push_back(static_cast<LabelId>(i));
            b &= b - 1;
        }
        return out;
    }

private:
    constexpr explicit LabelSet(std::uint64_t bits) : bits_(bits) {}
    std::uint64_t bits_ = 0;
};

constexpr bool is_subset(LabelSet a, LabelSet b) { return a.subset_of(b); }

// Antichain of label sets: no member is a subset of another, no duplicates.
// Stored as a flat unsorted list; families stay small (antichain width over
// at most 64 labels at the scales this engine targets).
class LabelSetFamily {
public:
    LabelSetFamily() = default;
    explicit LabelSetFamily(std::initializer_list<LabelSet> sets) {
        for (LabelSet s : sets) insert(s);
    }

    // If some member is a subset of L (equality included), the family is
    // unchanged and false is returned. Otherwise all strict supersets of L
    // are removed, L is added, and true is returned.
    bool insert(LabelSet l) {
        for (LabelSet m : sets_)
            if (m.subset_of(l)) return false;
        std::erase_if(sets_, [l](LabelSet m) { return l.subset_of(m); });
        sets_.push_back(l);
        return true;
    }

    // True iff some member is a subset of L.
    bool admits(LabelSet l) const {
        for (LabelSet m : sets_)
            if (m.subset_of(l)) return true;
        return false;
    }

    bool contains(LabelSet l) const {
        for (LabelSet m : sets_)
            if (m == l) return true;
        return false;
    }

    // Set equality, order-insensitive.
    bool same_sets(const LabelSetFamily& other) const {
        if (sets_.size() != other.sets_.size()) return false;
        for (LabelSet m : sets_)
            if (!other.contains(m)) return false;
        return true;
    }

    std::size_t size() const { return sets_.size(); }
    bool empty() const { return sets_.empty(); }

    auto begin() const { return sets_.begin(); }
    auto end() const { return sets_.end(); }

    const std::vector<LabelSet>& sets() const { return sets_; }

    // Canonical (bit-order sorted) copy, used by the index serializer so that
    // identical builds produce identical bytes.
    std::vector<LabelSet> sorted_sets() const;

private:
    std::vector<LabelSet> sets_;
};

// Renders as a sorted label-name list in braces, e.g. "{advisorOf,follows}".
std::string format_label_set(LabelSet l, std::span<const std::string> label_names);

} // namespace lscr
