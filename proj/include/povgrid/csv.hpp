// povgrid/csv.hpp - deterministic CSV formatting.
//
// Doubles use the shortest round-trip decimal form (std::to_chars), '.' as
// the decimal separator, '\n' line endings, UTF-8 - so identical values
// always produce identical bytes.
#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>

#include "povgrid/errors.hpp"

namespace povgrid {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);  // binary: keep '\n' endings everywhere
    if (!os) throw IoError("cannot open for writing: " + path);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw IoError("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    std::string content((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return content;
}

}  // namespace povgrid
