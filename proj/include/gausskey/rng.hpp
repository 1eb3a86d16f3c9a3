#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gausskey {

// Labeled substreams derived from one master seed, so channel noise, bin
// assignment, hash seeds and tie-breaking stay independent and reproducible.
class RngStreams {
public:
    explicit RngStreams(std::uint64_t master) : master_(master) {}

    std::uint64_t derive(std::string_view label, std::uint64_t index = 0) const;
    std::mt19937_64 stream(std::string_view label, std::uint64_t index = 0) const {
        return std::mt19937_64(derive(label, index));
    }

    std::uint64_t master() const { return master_; }

private:
    std::uint64_t master_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace gausskey
