#include "adaptrom/io.hpp"

#include "adaptrom/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>

namespace adaptrom {

namespace {

static_assert(std::numeric_limits<double>::is_iec559, "ROMX stores IEEE-754 binary64");

template <class T>
void put_le(std::ostream& out, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& in, const char* what) {
    unsigned char bytes[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw TruncatedFile(std::string("ROMX: truncated ") + what);
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace

void write_matrix(std::ostream& out, const Matrix& m) {
    if (m.rows() < 1 || m.cols() < 1) throw InvalidArgument("ROMX: empty matrices are not representable");
    if (!m.allFinite()) throw NonFinite("ROMX: matrix has NaN/Inf entries");
    out.write(kRomxMagic, 4);
    put_le<std::uint32_t>(out, kRomxVersion);
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
    for (Index c = 0; c < m.cols(); ++c)
        for (Index r = 0; r < m.rows(); ++r) put_le<double>(out, m(r, c));
    if (!out) throw IoError("ROMX: write failed");
}

Matrix read_matrix(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4)) throw TruncatedFile("ROMX: truncated magic");
    if (std::memcmp(magic, kRomxMagic, 4) != 0) throw BadMagic("ROMX: bad magic bytes");
    const auto version = get_le<std::uint32_t>(in, "version");
    if (version != kRomxVersion) throw VersionMismatch("ROMX: unsupported version " + std::to_string(version));
    const auto rows = get_le<std::uint64_t>(in, "row count");
    const auto cols = get_le<std::uint64_t>(in, "column count");
    if (rows == 0 || cols == 0) throw InvalidArgument("ROMX: empty matrix in file");
    constexpr auto kMax = static_cast<std::uint64_t>(std::numeric_limits<Index>::max());
    if (rows > kMax / cols) throw TruncatedFile("ROMX: dimensions overflow");
    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (Index c = 0; c < m.cols(); ++c)
        for (Index r = 0; r < m.rows(); ++r) m(r, c) = get_le<double>(in, "payload");
    return m;
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_matrix(out, m);
}

Matrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_matrix(in);
}

void write_grid_csv(const std::filesystem::path& path, std::span<const double> values, Index nx, Index ny) {
    if (static_cast<Index>(values.size()) != nx * ny) throw ShapeMismatch("grid CSV: value count != nx * ny");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << std::setprecision(17);
    for (Index j = 0; j < ny; ++j) {
        for (Index i = 0; i < nx; ++i) {
            if (i) out << ',';
            out << values[static_cast<std::size_t>(j * nx + i)];
        }
        out << '\n';
    }
    if (!out) throw IoError("grid CSV: write failed");
}

}  // namespace adaptrom
