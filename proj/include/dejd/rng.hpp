#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dejd {

/// Explicitly seeded random stream. The same seed always yields the same
/// draw sequence; substreams derived with distinct labels are independent
/// streams that are themselves deterministic given (seed, label).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    RngStream substream(std::uint64_t label) const;
    RngStream substream(std::string_view label) const;

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw strictly inside (0, 1).
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace dejd
