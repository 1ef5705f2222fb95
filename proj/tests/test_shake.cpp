#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "logcleanse/shake128.hpp"

using namespace logcleanse;

// Expected digests frozen from an independent reference implementation
// (Python hashlib.shake_128) before this module was written.

TEST_CASE("known digests") {
    CHECK(Shake128::hex("", 32) == "7f9c2ba4");
    CHECK(Shake128::hex("", 64) == "7f9c2ba4e88f827d");
    CHECK(Shake128::hex("", 256) ==
          "7f9c2ba4e88f827d616045507605853ed73b8093f6efbc88eb1a6eacfa66ef26");
    CHECK(Shake128::hex("abc", 32) == "5881092d");
    CHECK(Shake128::hex("abc", 128) == "5881092dd818bf5cf8a3ddb793fbcba7");
}

TEST_CASE("inputs crossing the 168-byte rate block") {
    CHECK(Shake128::hex(std::string(168, 'a'), 32) == "c22e1158");
    CHECK(Shake128::hex(std::string(200, 'a'), 32) == "70ac9b97");
}

TEST_CASE("long squeeze output") {
    const std::string hex = Shake128::hex("abc", 1600);  // 200 bytes
    REQUIRE(hex.size() == 400);
    CHECK(hex.substr(0, 16) == "5881092dd818bf5c");
    CHECK(hex.substr(400 - 16) == "4818cb006aa5b4cd");
}

TEST_CASE("prefix property across output lengths") {
    const std::string long_hex = Shake128::hex("Accepted #KEY# for #USR# from #IP4#", 256);
    for (unsigned bits = 8; bits <= 256; bits += 8)
        CHECK(Shake128::hex("Accepted #KEY# for #USR# from #IP4#", bits) ==
              long_hex.substr(0, bits / 4));
}

TEST_CASE("incremental absorb matches one-shot") {
    Shake128 xof;
    xof.absorb("Accepted #KEY# ");
    xof.absorb("for #USR# from #IP4#");
    xof.finalize();
    unsigned char buf[4];
    xof.squeeze(buf, sizeof buf);
    char hex[9];
    std::snprintf(hex, sizeof hex, "%02x%02x%02x%02x", buf[0], buf[1], buf[2], buf[3]);
    CHECK(std::string(hex) == Shake128::hex("Accepted #KEY# for #USR# from #IP4#", 32));
    CHECK(std::string(hex) == "35a2b1e8");
}

TEST_CASE("chunked squeeze equals one-shot squeeze") {
    Shake128 xof;
    xof.absorb("chunked");
    xof.finalize();
    std::string chunked;
    for (int i = 0; i < 50; ++i) {
        unsigned char b[7];
        xof.squeeze(b, sizeof b);
        for (unsigned char c : b) {
            chunked.push_back("0123456789abcdef"[c >> 4]);
            chunked.push_back("0123456789abcdef"[c & 0xF]);
        }
    }
    CHECK(chunked == Shake128::hex("chunked", 50 * 7 * 8));
}
