#include "logcleanse/shake128.hpp"

#include <bit>
#include <cassert>
#include <cstring>

// Lane bytes are accessed directly in memory order; Keccak lanes are
// little-endian, so this only works on little-endian targets.
static_assert(std::endian::native == std::endian::little);

namespace logcleanse {

namespace {

constexpr std::uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr int kRotation[25] = {
    0,  1,  62, 28, 27,
    36, 44, 6,  55, 20,
    3,  10, 43, 25, 39,
    41, 45, 15, 21, 8,
    18, 2,  61, 56, 14,
};

inline std::uint64_t rotl(std::uint64_t v, int n) {
    return n == 0 ? v : (v << n) | (v >> (64 - n));
}

}  // namespace

void Shake128::permute() {
    auto& a = state_;
    for (int round = 0; round < 24; ++round) {
        // theta
        std::uint64_t c[5], d[5];
        for (int x = 0; x < 5; ++x)
            c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        for (int x = 0; x < 5; ++x)
            d[x] = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 25; y += 5) a[x + y] ^= d[x];

        // rho + pi
        std::uint64_t b[25];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl(a[x + 5 * y], kRotation[x + 5 * y]);

        // chi
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 25; y += 5)
                a[x + y] = b[x + y] ^ (~b[(x + 1) % 5 + y] & b[(x + 2) % 5 + y]);

        // iota
        a[0] ^= kRoundConstants[round];
    }
}

void Shake128::absorb(const void* data, std::size_t len) {
    assert(!finalized_);
    const auto* bytes = static_cast<const unsigned char*>(data);
    auto* lanes = reinterpret_cast<unsigned char*>(state_.data());
    for (std::size_t i = 0; i < len; ++i) {
        lanes[pos_++] ^= bytes[i];
        if (pos_ == kRate) {
            permute();
            pos_ = 0;
        }
    }
}

void Shake128::finalize() {
    assert(!finalized_);
    auto* lanes = reinterpret_cast<unsigned char*>(state_.data());
    lanes[pos_] ^= 0x1F;
    lanes[kRate - 1] ^= 0x80;
    permute();
    pos_ = 0;
    finalized_ = true;
}

void Shake128::squeeze(void* out, std::size_t len) {
    assert(finalized_);
    auto* dst = static_cast<unsigned char*>(out);
    const auto* lanes = reinterpret_cast<const unsigned char*>(state_.data());
    for (std::size_t i = 0; i < len; ++i) {
        if (pos_ == kRate) {
            permute();
            pos_ = 0;
        }
        dst[i] = lanes[pos_++];
    }
}

std::string Shake128::hex(std::string_view input, unsigned bits) {
    assert(bits > 0 && bits % 8 == 0);
    Shake128 xof;
    xof.absorb(input);
    xof.finalize();
    std::string out;
    out.reserve(bits / 4);
    static constexpr char kHex[] = "0123456789abcdef";
    for (unsigned i = 0; i < bits / 8; ++i) {
        unsigned char byte = 0;
        xof.squeeze(&byte, 1);
        out.push_back(kHex[byte >> 4]);
        out.push_back(kHex[byte & 0xF]);
    }
    return out;
}

}  // namespace logcleanse
