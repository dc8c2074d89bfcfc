#include "sburg/field_io.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace sburg {

namespace {
constexpr char kFieldMagic[4] = {'B', 'F', 'D', '1'};
constexpr std::uint32_t kFieldVersion = 1;

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
void read_pod(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
}
}  // namespace

void save_field_bfd(const std::filesystem::path& file, const Field& f, double t) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw std::runtime_error("field: cannot open " + file.string() + " for writing");
    os.write(kFieldMagic, 4);
    write_pod(os, kFieldVersion);
    write_pod(os, f.grid.length);
    write_pod(os, static_cast<std::uint64_t>(f.grid.n));
    write_pod(os, t);
    os.write(reinterpret_cast<const char*>(f.v.data()), sizeof(double) * f.v.size());
    if (!os) throw std::runtime_error("field: write failed for " + file.string());
}

LoadedField load_field_bfd(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw std::runtime_error("field: cannot open " + file.string());
    char magic[4];
    is.read(magic, 4);
    if (std::memcmp(magic, kFieldMagic, 4) != 0)
        throw std::runtime_error("field: bad magic in " + file.string());
    std::uint32_t version;
    read_pod(is, version);
    if (version != kFieldVersion) throw std::runtime_error("field: unsupported version");
    double length, t;
    std::uint64_t n;
    read_pod(is, length);
    read_pod(is, n);
    read_pod(is, t);
    LoadedField lf;
    lf.field = Field(PeriodicGrid::make(length, static_cast<int>(n)));
    lf.t = t;
    is.read(reinterpret_cast<char*>(lf.field.v.data()), sizeof(double) * n);
    if (!is) throw std::runtime_error("field: truncated file " + file.string());
    return lf;
}

void save_field_csv(const std::filesystem::path& file, const Field& f) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("field: cannot open " + file.string());
    os << "x,value\n" << std::setprecision(17);
    for (int j = 0; j < f.n(); ++j) os << f.grid.x(j) << "," << f[j] << "\n";
}

void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size())
        throw std::invalid_argument("csv: header/column count mismatch");
    std::ofstream os(file);
    if (!os) throw std::runtime_error("csv: cannot open " + file.string());
    os << std::setprecision(17);
    for (std::size_t c = 0; c < header.size(); ++c)
        os << header[c] << (c + 1 < header.size() ? ',' : '\n');
    if (columns.empty()) return;
    const std::size_t rows = columns[0].size();
    for (const auto& col : columns)
        if (col.size() != rows) throw std::invalid_argument("csv: ragged columns");
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < columns.size(); ++c)
            os << columns[c][r] << (c + 1 < columns.size() ? ',' : '\n');
}

std::string fnv1a_hex(std::span<const unsigned char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string fnv1a_hex(const std::string& s) {
    return fnv1a_hex(std::span<const unsigned char>(
        reinterpret_cast<const unsigned char*>(s.data()), s.size()));
}

std::string hash_file(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw std::runtime_error("hash: cannot open " + file.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return fnv1a_hex(ss.str());
}

}  // namespace sburg
