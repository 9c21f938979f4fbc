#include <doctest.h>

#include <string>

#include "adept/sha256.hpp"

using namespace adept;

// FIPS 180-4 / NIST CAVP vectors.
TEST_CASE("sha256 standard vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    CHECK(sha256_hex(std::string(1000000, 'a')) ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("sha256 incremental updates match one-shot") {
    const std::string data = "the quick brown fox jumps over the lazy dog, repeatedly";
    for (std::size_t split = 0; split <= data.size(); split += 7) {
        Sha256 h;
        h.update(std::string_view(data).substr(0, split));
        h.update(std::string_view(data).substr(split));
        CHECK(h.finish_hex() == sha256_hex(data));
    }
}

TEST_CASE("sha256 padding boundaries") {
    // Lengths around the 55/56/64 byte block-padding edges.
    for (std::size_t len : {55u, 56u, 57u, 63u, 64u, 65u, 119u, 120u}) {
        const std::string data(len, 'x');
        Sha256 h;
        for (char c : data) h.update(std::string_view(&c, 1));
        CHECK(h.finish_hex() == sha256_hex(data));
    }
}
