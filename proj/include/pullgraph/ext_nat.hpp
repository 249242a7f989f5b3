#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pullgraph {

// A natural number or infinity. Used for edge multiplicities, where
// infinity stands for a countably infinite family of parallel edges.
class ExtNat {
public:
    constexpr ExtNat() = default;
    constexpr ExtNat(std::uint64_t n) : value_(n) {}  // NOLINT(google-explicit-constructor)

    static constexpr ExtNat infinity() {
        ExtNat r;
        r.infinite_ = true;
        return r;
    }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr bool is_finite() const { return !infinite_; }
    constexpr bool is_zero() const { return !infinite_ && value_ == 0; }

    std::uint64_t value() const {
        if (infinite_) throw std::logic_error("ExtNat::value() called on infinity");
        return value_;
    }

    // True iff an index lies below this multiplicity.
    constexpr bool admits_index(std::uint64_t index) const { return infinite_ || index < value_; }

    friend ExtNat operator+(ExtNat a, ExtNat b) {
        if (a.infinite_ || b.infinite_) return infinity();
        if (a.value_ > UINT64_MAX - b.value_) throw std::overflow_error("ExtNat addition overflow");
        return ExtNat(a.value_ + b.value_);
    }
    ExtNat& operator+=(ExtNat other) { return *this = *this + other; }

    friend constexpr bool operator==(const ExtNat& a, const ExtNat& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend constexpr std::strong_ordering operator<=>(const ExtNat& a, const ExtNat& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
        return a.value_ <=> b.value_;
    }

    std::string to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

private:
    std::uint64_t value_ = 0;
    bool infinite_ = false;
};

}  // namespace pullgraph
