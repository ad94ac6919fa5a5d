#pragma once

// Binary grayscale PGM (P5), 8- or 16-bit, read as relative luminance.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <stdexcept>
#include <string>

#include "saclat/image.hpp"
#include "saclat/io/csv.hpp"

namespace saclat::io {

namespace detail {

inline long pgm_header_value(std::istream& in) {
    std::string tok;
    while (tok.empty()) {
        const int c = in.get();
        if (c == EOF) {
            throw SchemaError("pgm: truncated header");
        }
        if (c == '#') {
            std::string comment;
            std::getline(in, comment);
        } else if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            while (std::isdigit(in.peek())) {
                tok.push_back(static_cast<char>(in.get()));
            }
        }
    }
    try {
        std::size_t used = 0;
        const long v = std::stol(tok, &used);
        if (used != tok.size() || v <= 0) {
            throw SchemaError("pgm: bad header value '" + tok + "'");
        }
        return v;
    } catch (const std::logic_error&) {
        throw SchemaError("pgm: bad header value '" + tok + "'");
    }
}

}  // namespace detail

inline Image read_pgm(std::istream& in) {
    char magic[2] = {};
    if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '5') {
        throw SchemaError("pgm: only binary P5 images are supported");
    }
    const long width = detail::pgm_header_value(in);
    const long height = detail::pgm_header_value(in);
    const long maxval = detail::pgm_header_value(in);
    if (maxval > 65535) {
        throw SchemaError("pgm: maxval above 65535");
    }
    if (!std::isspace(in.get())) {
        throw SchemaError("pgm: missing separator after header");
    }
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    Image img(static_cast<std::size_t>(width), static_cast<std::size_t>(height));
    std::string raw(img.pixels.size() * bytes_per, '\0');
    if (!in.read(raw.data(), static_cast<std::streamsize>(raw.size()))) {
        throw SchemaError("pgm: truncated pixel data");
    }
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        unsigned v = static_cast<unsigned char>(raw[i * bytes_per]);
        if (bytes_per == 2) {
            v = (v << 8) | static_cast<unsigned char>(raw[i * 2 + 1]);
        }
        if (v > static_cast<unsigned>(maxval)) {
            throw SchemaError("pgm: pixel above maxval");
        }
        img.pixels[i] = static_cast<double>(v) / static_cast<double>(maxval);
    }
    return img;
}

inline Image read_pgm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SchemaError("cannot open " + path);
    }
    return read_pgm(in);
}

inline void write_pgm(std::ostream& out, const Image& img, unsigned maxval = 255) {
    out << "P5\n" << img.width << ' ' << img.height << '\n' << maxval << '\n';
    for (double p : img.pixels) {
        const auto v = static_cast<unsigned>(std::lround(std::clamp(p, 0.0, 1.0) * maxval));
        if (maxval > 255) {
            out.put(static_cast<char>(v >> 8));
        }
        out.put(static_cast<char>(v & 0xff));
    }
}

}  // namespace saclat::io
