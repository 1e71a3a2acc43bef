#include <cmath>

#include "binmorph/io.hpp"

namespace binmorph {

namespace {

constexpr std::string_view kMagic = "BVOL1";

class LineReader {
public:
    explicit LineReader(std::string_view bytes) : bytes_(bytes) {}

    std::string_view line(const char* what) {
        const std::size_t end = bytes_.find('\n', pos_);
        if (end == std::string_view::npos) {
            throw FormatError("BVOL: truncated header at byte offset " + std::to_string(pos_) + " while reading " +
                              what);
        }
        const std::string_view out = bytes_.substr(pos_, end - pos_);
        pos_ = end + 1;
        return out;
    }
    std::size_t offset() const { return pos_; }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

// "<keyword> a b c" with single spaces.
std::array<std::string_view, 3> three_fields(std::string_view line, std::string_view keyword) {
    if (line.substr(0, keyword.size() + 1) != std::string(keyword) + " ") {
        throw FormatError("BVOL: expected '" + std::string(keyword) + " ...' line, got '" + std::string(line) + "'");
    }
    std::string_view rest = line.substr(keyword.size() + 1);
    std::array<std::string_view, 3> out;
    for (int i = 0; i < 3; ++i) {
        const std::size_t sp = rest.find(' ');
        if ((i < 2) != (sp != std::string_view::npos)) {
            throw FormatError("BVOL: '" + std::string(keyword) + "' line needs exactly three values");
        }
        out[i] = rest.substr(0, sp);
        rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
    }
    return out;
}

}  // namespace

std::string encode_bvol(const BinaryVolume& v) {
    std::string out;
    out += kMagic;
    out += "\ndims " + std::to_string(v.nx()) + " " + std::to_string(v.ny()) + " " + std::to_string(v.nz()) + "\n";
    out += "spacing " + format_number(v.spacing()[0]) + " " + format_number(v.spacing()[1]) + " " +
           format_number(v.spacing()[2]) + "\n";
    out += "data bitpacked\n";
    const std::vector<std::uint8_t> payload = v.pack_linear();
    out.append(reinterpret_cast<const char*>(payload.data()), payload.size());
    return out;
}

BinaryVolume decode_bvol(std::string_view bytes, std::vector<std::string>* warnings) {
    LineReader reader(bytes);
    if (reader.line("magic") != kMagic) {
        throw FormatError("BVOL: bad magic, expected 'BVOL1'");
    }
    const auto dim_fields = three_fields(reader.line("dims"), "dims");
    Dims dims;
    int* targets[3] = {&dims.nx, &dims.ny, &dims.nz};
    for (int i = 0; i < 3; ++i) {
        const long long n = parse_int(dim_fields[i], "BVOL dimension");
        if (n <= 0 || n > (1 << 24)) {
            throw FormatError("BVOL: dimension out of range: " + std::string(dim_fields[i]));
        }
        *targets[i] = static_cast<int>(n);
    }
    const auto spacing_fields = three_fields(reader.line("spacing"), "spacing");
    Spacing spacing{};
    for (int i = 0; i < 3; ++i) {
        spacing[i] = parse_double(spacing_fields[i], "BVOL spacing");
        if (!std::isfinite(spacing[i]) || spacing[i] <= 0.0) {
            throw FormatError("BVOL: spacing must be positive and finite, got " + std::string(spacing_fields[i]));
        }
    }
    if (reader.line("data") != "data bitpacked") {
        throw FormatError("BVOL: expected 'data bitpacked' line");
    }

    const std::size_t expected = (dims.voxel_count() + 7) / 8;
    const std::string_view payload = bytes.substr(reader.offset());
    if (payload.size() != expected) {
        throw FormatError("BVOL: payload length mismatch at byte offset " + std::to_string(reader.offset()) +
                          ": expected " + std::to_string(expected) + " bytes, found " +
                          std::to_string(payload.size()));
    }
    const auto* data = reinterpret_cast<const std::uint8_t*>(payload.data());
    const std::size_t used_bits = dims.voxel_count() % 8;
    if (used_bits != 0 && (data[expected - 1] >> used_bits) != 0 && warnings != nullptr) {
        warnings->push_back("BVOL: nonzero pad bits in final payload byte (ignored)");
    }
    return BinaryVolume::unpack_linear(dims, spacing, {data, expected});
}

BinaryVolume read_volume(const std::filesystem::path& path, std::vector<std::string>* warnings) {
    try {
        return decode_bvol(read_file(path), warnings);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_volume(const BinaryVolume& v, const std::filesystem::path& path) {
    write_file_atomic(path, encode_bvol(v));
}

}  // namespace binmorph
