#include "dejd/rng.hpp"

namespace dejd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace

RngStream RngStream::substream(std::uint64_t label) const {
    // Mix (seed, label) into a fresh seed; the double pass keeps nearby
    // labels from producing correlated engine states.
    std::uint64_t mixed = splitmix64(splitmix64(seed_) ^ splitmix64(label + 0x632BE59BD9B4E019ull));
    return RngStream(mixed);
}

RngStream RngStream::substream(std::string_view label) const {
    return substream(fnv1a(label));
}

}  // namespace dejd
