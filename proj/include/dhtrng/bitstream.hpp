#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dhtrng {

// Packed bit sequence. The first generated bit is the least significant bit
// of the first byte; files written as .bin use the same order, .txt files
// hold one '0'/'1' character per bit with no separators.
class BitStream {
public:
    BitStream() = default;

    void push_back(int bit) {
        const size_t byte = nbits_ >> 3;
        if (byte == bytes_.size()) bytes_.push_back(0);
        if (bit) bytes_[byte] |= static_cast<uint8_t>(1u << (nbits_ & 7));
        ++nbits_;
    }

    int operator[](size_t i) const { return (bytes_[i >> 3] >> (i & 7)) & 1; }

    size_t size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }
    const std::vector<uint8_t>& bytes() const { return bytes_; }

    void reserve_bits(size_t n) { bytes_.reserve((n + 7) / 8); }

    // Count of one bits.
    uint64_t popcount() const;

    // Bits [first, first+count) as a big-endian word, count <= 64.
    // Stream order: the earliest bit lands in the most significant position.
    uint64_t word(size_t first, int count) const;

    void append(const BitStream& other);

    static BitStream from_string(const std::string& zero_one);
    std::string to_string() const;

    void write_bin(const std::string& path) const;
    void write_txt(const std::string& path) const;
    static BitStream read_bin(const std::string& path);
    static BitStream read_txt(const std::string& path);

    // Auto-detects by extension: .bin packed, .txt ASCII.
    static BitStream read_file(const std::string& path);

    bool operator==(const BitStream& other) const {
        return nbits_ == other.nbits_ && bytes_ == other.bytes_;
    }

private:
    std::vector<uint8_t> bytes_;
    size_t nbits_ = 0;
};

}  // namespace dhtrng
