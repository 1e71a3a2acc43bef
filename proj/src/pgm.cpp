#include <cctype>

#include "binmorph/io.hpp"

namespace binmorph {

namespace {

class HeaderReader {
public:
    HeaderReader(std::string_view bytes, std::size_t start) : bytes_(bytes), pos_(start) {}

    std::size_t offset() const { return pos_; }

    // Skips whitespace and '#' comments, then reads one token.
    std::string_view token(const char* what) {
        for (;;) {
            while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
            if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
                continue;
            }
            break;
        }
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
        if (start == pos_) {
            throw FormatError("PGM: truncated header at byte offset " + std::to_string(start) + " while reading " +
                              what);
        }
        return bytes_.substr(start, pos_ - start);
    }

    void single_whitespace() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            throw FormatError("PGM: expected whitespace after maxval at byte offset " + std::to_string(pos_));
        }
        ++pos_;
    }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

int positive_dimension(std::string_view token, const char* what) {
    const long long v = parse_int(token, std::string("PGM ") + what);
    if (v <= 0 || v > (1 << 20)) {
        throw FormatError("PGM: " + std::string(what) + " out of range: " + std::string(token));
    }
    return static_cast<int>(v);
}

}  // namespace

std::string encode_pgm(const SliceMask& mask) {
    std::string out = "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n255\n";
    out.reserve(out.size() + mask.bits.size());
    for (std::uint8_t b : mask.bits) out.push_back(static_cast<char>(b ? 255 : 0));
    return out;
}

SliceMask decode_pgm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes.substr(0, 2) != "P5") {
        throw FormatError("PGM: bad magic, expected 'P5'");
    }
    HeaderReader header(bytes, 2);
    const int width = positive_dimension(header.token("width"), "width");
    const int height = positive_dimension(header.token("height"), "height");
    const long long maxval = parse_int(header.token("maxval"), "PGM maxval");
    if (maxval != 255) {
        throw FormatError("PGM: unsupported maxval " + std::to_string(maxval) + ", expected 255");
    }
    header.single_whitespace();

    const std::size_t data_offset = header.offset();
    const std::size_t expected = static_cast<std::size_t>(width) * height;
    const std::size_t available = bytes.size() - data_offset;
    if (available < expected) {
        throw FormatError("PGM: truncated payload at byte offset " + std::to_string(bytes.size()) + ": expected " +
                          std::to_string(expected) + " pixel bytes starting at offset " +
                          std::to_string(data_offset) + ", found " + std::to_string(available));
    }
    if (available > expected) {
        throw FormatError("PGM: " + std::to_string(available - expected) + " trailing bytes after payload at offset " +
                          std::to_string(data_offset + expected));
    }
    SliceMask mask(width, height);
    for (std::size_t i = 0; i < expected; ++i) {
        mask.bits[i] = static_cast<unsigned char>(bytes[data_offset + i]) >= 128 ? 1 : 0;
    }
    return mask;
}

SliceMask read_slice_mask(const std::filesystem::path& path) {
    try {
        return decode_pgm(read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_slice_mask(const SliceMask& mask, const std::filesystem::path& path) {
    write_file_atomic(path, encode_pgm(mask));
}

}  // namespace binmorph
