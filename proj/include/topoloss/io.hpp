#pragma once

// PGM (P2/P5, 8- or 16-bit) and CSV readers/writers for likelihood maps and
// binary masks. PGM samples are normalized by maxval; CSV values pass through.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <stdexcept>
#include <type_traits>
#include <system_error>
#include <variant>
#include <vector>

#include "topoloss/error.hpp"
#include "topoloss/grid.hpp"

namespace topoloss {

enum class MapKind { likelihood, mask };

struct RawGrid {
    int height = 0;
    int width = 0;
    std::vector<double> values;
};

namespace detail {

class PgmReader {
public:
    explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

    RawGrid read() {
        if (bytes_.size() < 2 || bytes_[0] != 'P' || (bytes_[1] != '2' && bytes_[1] != '5'))
            throw ParseError("not a P2/P5 PGM file", 0);
        const bool ascii = bytes_[1] == '2';
        pos_ = 2;
        const long width = header_int();
        const long height = header_int();
        const long maxval = header_int();
        if (width < 1 || height < 1)
            throw ParseError("PGM dimensions must be positive", pos_);
        if (maxval < 1 || maxval > 65535)
            throw ParseError("PGM maxval must be in [1, 65535]", pos_);

        RawGrid out{static_cast<int>(height), static_cast<int>(width), {}};
        const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
        out.values.reserve(count);
        const double scale = static_cast<double>(maxval);

        if (ascii) {
            for (std::size_t i = 0; i < count; ++i) {
                const long v = header_int();
                if (v > maxval)
                    throw ParseError("PGM sample exceeds maxval", pos_);
                out.values.push_back(static_cast<double>(v) / scale);
            }
            return out;
        }

        // Exactly one whitespace byte separates the header from the raster.
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_]))
            throw ParseError("expected whitespace before PGM raster", pos_);
        ++pos_;
        const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
        if (bytes_.size() - pos_ < count * bytes_per_sample)
            throw ParseError("PGM raster is truncated", bytes_.size());
        for (std::size_t i = 0; i < count; ++i) {
            unsigned v = static_cast<unsigned char>(bytes_[pos_]);
            if (bytes_per_sample == 2)
                v = (v << 8) | static_cast<unsigned char>(bytes_[pos_ + 1]);
            if (v > static_cast<unsigned>(maxval))
                throw ParseError("PGM sample exceeds maxval", pos_);
            pos_ += bytes_per_sample;
            out.values.push_back(static_cast<double>(v) / scale);
        }
        return out;
    }

private:
    static bool is_space(char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n')
                    ++pos_;
            } else {
                break;
            }
        }
    }

    long header_int() {
        skip_space_and_comments();
        const std::size_t start = pos_;
        long value = 0;
        const auto [ptr, ec] = std::from_chars(bytes_.data() + pos_, bytes_.data() + bytes_.size(), value);
        if (ec != std::errc{} || value < 0)
            throw ParseError("expected a non-negative integer", start);
        pos_ = static_cast<std::size_t>(ptr - bytes_.data());
        return value;
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

inline RawGrid parse_csv(std::string_view bytes) {
    RawGrid out;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        std::size_t eol = bytes.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = bytes.size();
        std::string_view line = bytes.substr(pos, eol - pos);
        const std::size_t line_start = pos;
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos)
            continue;

        int columns = 0;
        std::size_t cell = 0;
        while (true) {
            std::size_t comma = line.find(',', cell);
            if (comma == std::string_view::npos)
                comma = line.size();
            std::size_t a = cell;
            std::size_t b = comma;
            while (a < b && (line[a] == ' ' || line[a] == '\t'))
                ++a;
            while (b > a && (line[b - 1] == ' ' || line[b - 1] == '\t'))
                --b;
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(line.data() + a, line.data() + b, v);
            if (a == b || ec != std::errc{} || ptr != line.data() + b)
                throw ParseError("malformed CSV number", line_start + a);
            out.values.push_back(v);
            ++columns;
            if (comma == line.size())
                break;
            cell = comma + 1;
        }
        if (out.height == 0)
            out.width = columns;
        else if (columns != out.width)
            throw ParseError("CSV row has " + std::to_string(columns) + " values, expected " +
                                 std::to_string(out.width),
                             line_start);
        ++out.height;
    }
    if (out.height == 0)
        throw ParseError("CSV file is empty", 0);
    return out;
}

inline bool has_extension(const std::filesystem::path& path, std::string_view ext) {
    std::string e = path.extension().string();
    for (char& c : e)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return e == ext;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline void append_double(std::string& out, double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

} // namespace detail

/// Parses PGM when the content starts with the "P2"/"P5" magic, CSV otherwise.
inline RawGrid parse_grid(std::string_view bytes) {
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5'))
        return detail::PgmReader(bytes).read();
    return detail::parse_csv(bytes);
}

inline LikelihoodMap to_likelihood(RawGrid raw) {
    return {raw.height, raw.width, std::move(raw.values)};
}

inline BinaryMask to_mask(const RawGrid& raw) {
    std::vector<std::uint8_t> out(raw.values.size());
    for (std::size_t i = 0; i < raw.values.size(); ++i) {
        const double v = raw.values[i];
        if (v != 0.0 && v != 1.0)
            throw ValidationError("mask has intermediate value " + std::to_string(v) + " at (" +
                                  std::to_string(i / static_cast<std::size_t>(raw.width)) + ", " +
                                  std::to_string(i % static_cast<std::size_t>(raw.width)) + ")");
        out[i] = static_cast<std::uint8_t>(v == 1.0);
    }
    return {raw.height, raw.width, std::move(out)};
}

inline LikelihoodMap load_likelihood(const std::filesystem::path& path) {
    return to_likelihood(parse_grid(detail::read_file(path)));
}

inline BinaryMask load_mask(const std::filesystem::path& path) {
    return to_mask(parse_grid(detail::read_file(path)));
}

inline std::variant<LikelihoodMap, BinaryMask> load_map(const std::filesystem::path& path, MapKind kind) {
    if (kind == MapKind::mask)
        return load_mask(path);
    return load_likelihood(path);
}

/// Binary PGM. `maxval` 255 writes 8-bit samples, anything larger 16-bit big-endian.
template <class T>
std::string encode_pgm(const Grid<T>& grid, unsigned maxval = 65535) {
    if (maxval < 1 || maxval > 65535)
        throw std::invalid_argument("PGM maxval must be in [1, 65535]");
    std::string out = "P5\n" + std::to_string(grid.width()) + " " + std::to_string(grid.height()) +
                      "\n" + std::to_string(maxval) + "\n";
    for (T v : grid.values()) {
        const double clamped = std::clamp(static_cast<double>(v), 0.0, 1.0);
        const auto q = static_cast<unsigned>(std::lround(clamped * maxval));
        if (maxval > 255)
            out.push_back(static_cast<char>((q >> 8) & 0xff));
        out.push_back(static_cast<char>(q & 0xff));
    }
    return out;
}

/// Shortest round-trip decimal representation, so CSV load after save is exact.
template <class T>
std::string encode_csv(const Grid<T>& grid) {
    std::string out;
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            if (c)
                out.push_back(',');
            detail::append_double(out, static_cast<double>(grid(r, c)));
        }
        out.push_back('\n');
    }
    return out;
}

/// Writes CSV for a ".csv" path and PGM otherwise. Masks use 8-bit PGM.
template <class T>
void save_map(const std::filesystem::path& path, const Grid<T>& grid) {
    if (detail::has_extension(path, ".csv"))
        detail::write_file(path, encode_csv(grid));
    else
        detail::write_file(path, encode_pgm(grid, std::is_same_v<T, std::uint8_t> ? 255u : 65535u));
}

} // namespace topoloss
