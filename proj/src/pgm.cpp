#include "shadowtouch/pgm.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "shadowtouch/errors.hpp"

namespace shadowtouch {

void write_pgm(const std::string& path, const Frame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    char header[96];
    const int n = std::snprintf(header, sizeof(header), "P5\n# t_ms=%.4f\n%d %d\n255\n",
                                frame.t_ms, frame.width, frame.height);
    out.write(header, n);
    out.write(reinterpret_cast<const char*>(frame.pixels.data()),
              static_cast<std::streamsize>(frame.pixels.size()));
    if (!out) throw DataError("failed writing '" + path + "'");
}

namespace {

// Reads the next PGM header token, skipping whitespace and '#' comments.
// Captures a t_ms comment value when one appears.
std::string next_token(std::istream& in, double& t_ms) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            std::string comment;
            while ((c = in.get()) != EOF && c != '\n') comment.push_back(static_cast<char>(c));
            const auto pos = comment.find("t_ms=");
            if (pos != std::string::npos) {
                try {
                    t_ms = std::stod(comment.substr(pos + 5));
                } catch (const std::exception&) {
                }
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

} // namespace

Frame read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    Frame frame;
    frame.t_ms = std::numeric_limits<double>::quiet_NaN();
    const std::string magic = next_token(in, frame.t_ms);
    if (magic != "P5") throw DataError("'" + path + "': not a binary PGM (P5) file");
    try {
        frame.width = std::stoi(next_token(in, frame.t_ms));
        frame.height = std::stoi(next_token(in, frame.t_ms));
        const int maxval = std::stoi(next_token(in, frame.t_ms));
        if (maxval != 255) throw DataError("'" + path + "': maxval must be 255");
    } catch (const DataError&) {
        throw;
    } catch (const std::exception&) {
        throw DataError("'" + path + "': malformed PGM header");
    }
    if (frame.width <= 0 || frame.height <= 0)
        throw DataError("'" + path + "': bad image dimensions");
    frame.pixels.resize(static_cast<std::size_t>(frame.width) *
                        static_cast<std::size_t>(frame.height));
    in.read(reinterpret_cast<char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(frame.pixels.size()))
        throw DataError("'" + path + "': truncated pixel data");
    return frame;
}

std::string frame_filename(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06d.pgm", index);
    return buf;
}

} // namespace shadowtouch
