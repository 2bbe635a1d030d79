// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chainsim {

using Bytes = std::vector<std::uint8_t>;

/// 32-byte digest. Always exactly 32 bytes by construction.
struct Hash256 {
    std::array<std::uint8_t, 32> bytes{};

    auto operator<=>(const Hash256&) const = default;
    bool is_zero() const
    {
        return std::all_of(bytes.begin(), bytes.end(), [](auto b) { return b == 0; });
    }
};

/// 20-byte account identifier, derived from the trailing bytes of a
/// public-key digest.
struct Address {
    std::array<std::uint8_t, 20> bytes{};

    auto operator<=>(const Address&) const = default;
    bool is_zero() const
    {
        return std::all_of(bytes.begin(), bytes.end(), [](auto b) { return b == 0; });
    }
};

inline Bytes bytes_of(std::string_view s)
{
    return Bytes(s.begin(), s.end());
}

inline std::string string_of(const Bytes& b)
{
    return std::string(b.begin(), b.end());
}

inline std::string to_hex(const std::uint8_t* data, std::size_t len)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0x0f]);
    }
    return out;
}

inline std::string to_hex(const Bytes& b) { return to_hex(b.data(), b.size()); }
inline std::string to_hex(const Hash256& h) { return to_hex(h.bytes.data(), h.bytes.size()); }
inline std::string to_hex(const Address& a) { return to_hex(a.bytes.data(), a.bytes.size()); }

inline int hex_nibble(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

inline Bytes from_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0)
        throw std::invalid_argument("hex string has odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("invalid hex digit");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

inline Hash256 hash_from_hex(std::string_view hex)
{
    Bytes raw = from_hex(hex);
    if (raw.size() != 32)
        throw std::invalid_argument("hash hex must decode to 32 bytes");
    Hash256 h;
    std::copy(raw.begin(), raw.end(), h.bytes.begin());
    return h;
}

inline Address address_from_hex(std::string_view hex)
{
    Bytes raw = from_hex(hex);
    if (raw.size() != 20)
        throw std::invalid_argument("address hex must decode to 20 bytes");
    Address a;
    std::copy(raw.begin(), raw.end(), a.bytes.begin());
    return a;
}

inline void append(Bytes& dst, const Bytes& src)
{
    dst.insert(dst.end(), src.begin(), src.end());
}

/// True when `needle` occurs as a contiguous substring of `hay`.
inline bool contains_subsequence(const Bytes& hay, const Bytes& needle)
{
    if (needle.empty()) return true;
    if (needle.size() > hay.size()) return false;
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

} // namespace chainsim
