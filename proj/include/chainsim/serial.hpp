// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <chainsim/bytes.hpp>
#include <chainsim/errors.hpp>

namespace chainsim {

// Canonical serialization: fixed field order, big-endian fixed-width
// integers, u32 length prefixes for variable-size byte strings. Hashes and
// signatures are computed over these bytes, so the encoding must never
// change shape for the same logical value.

class Encoder {
public:
    Bytes take() { return std::move(buf_); }
    const Bytes& bytes() const { return buf_; }

    Encoder& u8(std::uint8_t v)
    {
        buf_.push_back(v);
        return *this;
    }

    Encoder& u32(std::uint32_t v)
    {
        for (int shift = 24; shift >= 0; shift -= 8)
            buf_.push_back(static_cast<std::uint8_t>(v >> shift));
        return *this;
    }

    Encoder& u64(std::uint64_t v)
    {
        for (int shift = 56; shift >= 0; shift -= 8)
            buf_.push_back(static_cast<std::uint8_t>(v >> shift));
        return *this;
    }

    Encoder& i64(std::int64_t v)
    {
        return u64(static_cast<std::uint64_t>(v));
    }

    Encoder& raw(const Bytes& b)
    {
        append(buf_, b);
        return *this;
    }

    Encoder& var_bytes(const Bytes& b)
    {
        u32(static_cast<std::uint32_t>(b.size()));
        return raw(b);
    }

    Encoder& str(const std::string& s)
    {
        return var_bytes(bytes_of(s));
    }

    Encoder& hash(const Hash256& h)
    {
        buf_.insert(buf_.end(), h.bytes.begin(), h.bytes.end());
        return *this;
    }

    Encoder& address(const Address& a)
    {
        buf_.insert(buf_.end(), a.bytes.begin(), a.bytes.end());
        return *this;
    }

    Encoder& boolean(bool v) { return u8(v ? 1 : 0); }

    template <typename T, typename Fn>
    Encoder& vec(const std::vector<T>& items, Fn&& encode_item)
    {
        u32(static_cast<std::uint32_t>(items.size()));
        for (const auto& item : items)
            encode_item(*this, item);
        return *this;
    }

    Encoder& bytes_vec(const std::vector<Bytes>& items)
    {
        return vec(items, [](Encoder& e, const Bytes& b) { e.var_bytes(b); });
    }

    Encoder& address_vec(const std::vector<Address>& items)
    {
        return vec(items, [](Encoder& e, const Address& a) { e.address(a); });
    }

private:
    Bytes buf_;
};

class Decoder {
public:
    explicit Decoder(Bytes data)
        : data_(std::move(data))
    {
    }

    bool done() const { return pos_ == data_.size(); }
    std::size_t remaining() const { return data_.size() - pos_; }

    std::uint8_t u8() { return take(1)[0]; }

    std::uint32_t u32()
    {
        auto b = take(4);
        std::uint32_t v = 0;
        for (auto byte : b)
            v = (v << 8) | byte;
        return v;
    }

    std::uint64_t u64()
    {
        auto b = take(8);
        std::uint64_t v = 0;
        for (auto byte : b)
            v = (v << 8) | byte;
        return v;
    }

    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }

    Bytes var_bytes()
    {
        auto len = u32();
        return take(len);
    }

    std::string str() { return string_of(var_bytes()); }

    Hash256 hash()
    {
        auto b = take(32);
        Hash256 h;
        std::copy(b.begin(), b.end(), h.bytes.begin());
        return h;
    }

    Address address()
    {
        auto b = take(20);
        Address a;
        std::copy(b.begin(), b.end(), a.bytes.begin());
        return a;
    }

    bool boolean() { return u8() != 0; }

    std::vector<Bytes> bytes_vec()
    {
        auto count = u32();
        std::vector<Bytes> out;
        out.reserve(count);
        for (std::uint32_t i = 0; i < count; ++i)
            out.push_back(var_bytes());
        return out;
    }

    std::vector<Address> address_vec()
    {
        auto count = u32();
        std::vector<Address> out;
        out.reserve(count);
        for (std::uint32_t i = 0; i < count; ++i)
            out.push_back(address());
        return out;
    }

private:
    Bytes take(std::size_t n)
    {
        if (pos_ + n > data_.size())
            throw ChainError(Err::ParseError, "truncated canonical encoding");
        Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
        pos_ += n;
        return out;
    }

    Bytes data_;
    std::size_t pos_ = 0;
};

// Single-value helpers for contract call arguments and storage values.

inline Bytes enc_u64(std::uint64_t v) { return Encoder{}.u64(v).take(); }
inline Bytes enc_i64(std::int64_t v) { return Encoder{}.i64(v).take(); }
inline Bytes enc_str(const std::string& s) { return bytes_of(s); }
inline Bytes enc_address(const Address& a) { return Bytes(a.bytes.begin(), a.bytes.end()); }
inline Bytes enc_hash(const Hash256& h) { return Bytes(h.bytes.begin(), h.bytes.end()); }
inline Bytes enc_bool(bool v) { return Bytes{static_cast<std::uint8_t>(v ? 1 : 0)}; }

inline std::uint64_t dec_u64(const Bytes& b)
{
    if (b.size() != 8)
        throw ChainError(Err::BadArguments, "expected 8-byte integer");
    Decoder d(b);
    return d.u64();
}

inline Address dec_address(const Bytes& b)
{
    if (b.size() != 20)
        throw ChainError(Err::BadArguments, "expected 20-byte address");
    Decoder d(b);
    return d.address();
}

inline Hash256 dec_hash(const Bytes& b)
{
    if (b.size() != 32)
        throw ChainError(Err::BadArguments, "expected 32-byte digest");
    Decoder d(b);
    return d.hash();
}

inline bool dec_bool(const Bytes& b)
{
    if (b.size() != 1)
        throw ChainError(Err::BadArguments, "expected 1-byte flag");
    return b[0] != 0;
}

} // namespace chainsim
