#include <array>
#include <fstream>
#include <iterator>

#include "psum/prime_engine.hpp"

namespace psum {

namespace {

constexpr std::array<char, 5> kMagic{'P', 'S', 'U', 'M', '1'};

std::uint64_t fnv1a(std::span<const unsigned char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void put_u64(std::vector<unsigned char>& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_varint(std::vector<unsigned char>& buf, std::uint64_t v) {
    while (v >= 0x80) {
        buf.push_back(static_cast<unsigned char>(v | 0x80));
        v >>= 7;
    }
    buf.push_back(static_cast<unsigned char>(v));
}

class Reader {
public:
    explicit Reader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{bytes_[pos_++]} << (8 * i);
        return v;
    }

    std::uint64_t varint() {
        std::uint64_t v = 0;
        for (int shift = 0; shift < 64; shift += 7) {
            need(1);
            const unsigned char b = bytes_[pos_++];
            v |= std::uint64_t{b & 0x7fu} << shift;
            if ((b & 0x80) == 0) return v;
        }
        throw std::runtime_error("PSUM1: varint overflow");
    }

    std::size_t position() const noexcept { return pos_; }

private:
    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size()) throw std::runtime_error("PSUM1: truncated file");
    }

    std::span<const unsigned char> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

void save_prime_table(const PrimeTable& table, const std::filesystem::path& path) {
    std::vector<unsigned char> buf(kMagic.begin(), kMagic.end());
    put_u64(buf, table.limit());
    put_u64(buf, table.size());
    std::uint64_t prev = 0;
    for (const std::uint64_t p : table.primes()) {
        put_varint(buf, p - prev);
        prev = p;
    }
    put_u64(buf, fnv1a(buf));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

PrimeTable load_prime_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < kMagic.size() + 24 || !std::equal(kMagic.begin(), kMagic.end(), buf.begin())) {
        throw std::runtime_error("PSUM1: bad magic in " + path.string());
    }
    const std::span<const unsigned char> body(buf.data(), buf.size() - 8);
    Reader trailer(std::span<const unsigned char>(buf.data() + body.size(), 8));
    if (trailer.u64() != fnv1a(body)) throw std::runtime_error("PSUM1: checksum mismatch in " + path.string());

    Reader r(body.subspan(kMagic.size()));
    const std::uint64_t limit = r.u64();
    const std::uint64_t count = r.u64();
    if (limit < 2 || count > limit) throw std::runtime_error("PSUM1: inconsistent header");
    std::vector<std::uint64_t> primes;
    primes.reserve(count);
    std::uint64_t prev = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t delta = r.varint();
        if (delta == 0 || (prev += delta) > limit) throw std::runtime_error("PSUM1: malformed prime list");
        primes.push_back(prev);
    }
    if (r.position() + kMagic.size() != body.size()) throw std::runtime_error("PSUM1: trailing bytes");
    return PrimeTable(limit, std::move(primes));
}

}  // namespace psum
