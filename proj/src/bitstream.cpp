#include "dhtrng/bitstream.hpp"

#include <bit>
#include <fstream>

#include "dhtrng/errors.hpp"

namespace dhtrng {

uint64_t BitStream::popcount() const {
    uint64_t ones = 0;
    const size_t full = nbits_ >> 3;
    for (size_t i = 0; i < full; ++i) ones += std::popcount(bytes_[i]);
    for (size_t i = full << 3; i < nbits_; ++i) ones += (*this)[i];
    return ones;
}

uint64_t BitStream::word(size_t first, int count) const {
    uint64_t w = 0;
    for (int i = 0; i < count; ++i) w = (w << 1) | static_cast<uint64_t>((*this)[first + i]);
    return w;
}

void BitStream::append(const BitStream& other) {
    for (size_t i = 0; i < other.size(); ++i) push_back(other[i]);
}

BitStream BitStream::from_string(const std::string& zero_one) {
    BitStream s;
    s.reserve_bits(zero_one.size());
    for (char c : zero_one) {
        if (c == '0' || c == '1') {
            s.push_back(c - '0');
        } else if (c != '\n' && c != '\r' && c != ' ') {
            throw ConfigError("bitstream text: unexpected character");
        }
    }
    return s;
}

std::string BitStream::to_string() const {
    std::string out(nbits_, '0');
    for (size_t i = 0; i < nbits_; ++i) out[i] = (*this)[i] ? '1' : '0';
    return out;
}

void BitStream::write_bin(const std::string& path) const {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(bytes_.data()),
            static_cast<std::streamsize>(bytes_.size()));
    if (!f) throw ConfigError("write failed: " + path);
}

void BitStream::write_txt(const std::string& path) const {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    const std::string s = to_string();
    f.write(s.data(), static_cast<std::streamsize>(s.size()));
    if (!f) throw ConfigError("write failed: " + path);
}

BitStream BitStream::read_bin(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open: " + path);
    BitStream s;
    s.bytes_.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    s.nbits_ = s.bytes_.size() * 8;
    return s;
}

BitStream BitStream::read_txt(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open: " + path);
    std::string text{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
    return from_string(text);
}

BitStream BitStream::read_file(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".txt") return read_txt(path);
    return read_bin(path);
}

}  // namespace dhtrng
