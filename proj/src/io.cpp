#include "gasket/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace gasket {

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

void write_stream_atomic(const std::filesystem::path& path,
                         const std::function<void(std::ostream&)>& writer) {
    const std::filesystem::path tmp =
        path.parent_path() / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        writer(out);
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    write_stream_atomic(path, [&](std::ostream& out) {
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    });
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string coord_key(LatticeCoord v) {
    return std::to_string(v.a) + "," + std::to_string(v.b);
}

LatticeCoord parse_coord_key(const std::string& key) {
    const std::size_t comma = key.find(',');
    if (comma == std::string::npos) {
        throw std::runtime_error("bad coordinate key: " + key);
    }
    return {static_cast<std::int32_t>(std::stol(key.substr(0, comma))),
            static_cast<std::int32_t>(std::stol(key.substr(comma + 1)))};
}

}  // namespace gasket
