#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace logcleanse {

/// SHAKE-128 extendable-output function (FIPS 202). Incremental absorb,
/// then squeeze any number of output bytes; shorter outputs are prefixes
/// of longer ones for the same input.
class Shake128 {
public:
    Shake128() = default;

    void absorb(const void* data, std::size_t len);
    void absorb(std::string_view s) { absorb(s.data(), s.size()); }

    /// Pads the input (domain suffix 0x1F) and switches to squeezing.
    /// Further absorb calls are invalid.
    void finalize();

    /// May be called repeatedly; output continues where the previous
    /// squeeze stopped.
    void squeeze(void* out, std::size_t len);

    /// One-shot digest of `input`, returning `bits/4` lowercase hex chars.
    /// `bits` must be a positive multiple of 8.
    static std::string hex(std::string_view input, unsigned bits);

private:
    static constexpr std::size_t kRate = 168;  // 1344-bit rate, 256-bit capacity

    void permute();

    std::array<std::uint64_t, 25> state_{};
    std::size_t pos_ = 0;
    bool finalized_ = false;
};

}  // namespace logcleanse
