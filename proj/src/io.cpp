#include "knotfield/io.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "knotfield/error.hpp"

namespace knotfield {

namespace {

void put_le(std::string& out, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

void put_be(std::string& out, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 7; b >= 0; --b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
    return out;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::io, "sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string link_hash(const Link& link) { return sha256_hex(format_link(link)); }

void write_vtk_legacy(const std::filesystem::path& path, const GridSpec& grid, const std::vector<NamedScalars>& arrays,
                      const std::string& title) {
    const auto [nx, ny, nz] = grid.dims;
    std::ostringstream hdr;
    hdr.precision(17);
    hdr << "# vtk DataFile Version 3.0\n"
        << title << "\n"
        << "BINARY\n"
        << "DATASET STRUCTURED_POINTS\n"
        << "DIMENSIONS " << nx << ' ' << ny << ' ' << nz << "\n"
        << "ORIGIN " << grid.origin.x << ' ' << grid.origin.y << ' ' << grid.origin.z << "\n"
        << "SPACING " << grid.spacing << ' ' << grid.spacing << ' ' << grid.spacing << "\n"
        << "POINT_DATA " << grid.count() << "\n";
    std::string out = hdr.str();
    for (const auto& a : arrays) {
        if (a.values.size() != grid.count()) {
            throw Error(ErrorKind::validation, "array '" + a.name + "' does not match the grid size");
        }
        out += "SCALARS " + a.name + " double 1\nLOOKUP_TABLE default\n";
        out.reserve(out.size() + 8 * grid.count() + 1);
        for (std::size_t k = 0; k < nz; ++k) {
            for (std::size_t j = 0; j < ny; ++j) {
                for (std::size_t i = 0; i < nx; ++i) put_be(out, a.values[grid.index(i, j, k)]);
            }
        }
        out += "\n";
    }
    write_text(path, out);
}

void write_raw(const std::filesystem::path& path, const std::vector<std::span<const double>>& arrays) {
    if (arrays.empty()) throw Error(ErrorKind::validation, "nothing to write");
    const std::size_t n = arrays.front().size();
    for (const auto& a : arrays) {
        if (a.size() != n) throw Error(ErrorKind::validation, "raw arrays differ in length");
    }
    std::string out;
    out.reserve(8 * n * arrays.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& a : arrays) put_le(out, a[i]);
    }
    write_text(path, out);
}

std::vector<double> read_raw(const std::filesystem::path& path) {
    const std::string bytes = read_text(path);
    if (bytes.size() % 8 != 0) throw Error(ErrorKind::io, path.string() + " is not a float64 array");
    std::vector<double> out(bytes.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) {
            bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[8 * i + b])) << (8 * b);
        }
        out[i] = std::bit_cast<double>(bits);
    }
    return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    auto out = open_out(path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorKind::io, "short write to " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace knotfield
