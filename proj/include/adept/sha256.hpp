#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace adept {

/// FIPS 180-4 SHA-256. Self-contained so trace hashing does not pull in a
/// crypto library; tests pin the standard vectors.
class Sha256 {
public:
    Sha256();

    void update(std::string_view data);

    /// Finishes the digest and returns it as 64 lowercase hex characters.
    /// The object must not be reused afterwards.
    std::string finish_hex();

private:
    void process_block(const unsigned char* block);

    std::uint32_t state_[8];
    unsigned char buffer_[64];
    std::size_t buffered_ = 0;
    std::uint64_t total_bytes_ = 0;
};

std::string sha256_hex(std::string_view data);

} // namespace adept
