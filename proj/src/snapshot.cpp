#include "smcf/snapshot.hpp"

#include "smcf/config.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace smcf {

namespace {

template <class T>
void put(std::ofstream& out, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char raw[sizeof(T)];
        std::memcpy(raw, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(raw[i], raw[sizeof(T) - 1 - i]);
        out.write(reinterpret_cast<const char*>(raw), sizeof(T));
    } else {
        out.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }
}

template <class T>
T get(std::ifstream& in) {
    unsigned char raw[sizeof(T)];
    in.read(reinterpret_cast<char*>(raw), sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(raw[i], raw[sizeof(T) - 1 - i]);
    T v;
    std::memcpy(&v, raw, sizeof(T));
    return v;
}

} // namespace

void write_snapshot(const std::string& path, const Field& f, double t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open snapshot file for writing: " + path);
    out.write("SMCF", 4);
    put<std::uint32_t>(out, snapshot_version);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(f.spec.d));
    for (int i = 0; i < f.spec.d; ++i) put<std::uint32_t>(out, static_cast<std::uint32_t>(f.spec.n));
    put<double>(out, f.spec.length);
    put<double>(out, t);
    for (const Complex& v : f.values) {
        put<double>(out, v.real());
        put<double>(out, v.imag());
    }
    if (!out) throw IoError("write failure on snapshot file: " + path);
}

std::pair<Field, double> read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open snapshot file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "SMCF", 4) != 0)
        throw IoError("bad snapshot magic in " + path);
    const auto version = get<std::uint32_t>(in);
    if (version != snapshot_version)
        throw IoError("unsupported snapshot version in " + path);
    const auto d = get<std::uint32_t>(in);
    if (d < 1 || d > 3) throw IoError("bad snapshot dimension in " + path);
    std::uint32_t n = 0;
    for (std::uint32_t i = 0; i < d; ++i) {
        const auto ni = get<std::uint32_t>(in);
        if (i == 0)
            n = ni;
        else if (ni != n)
            throw IoError("anisotropic snapshot grid unsupported: " + path);
    }
    const double length = get<double>(in);
    const double t = get<double>(in);
    if (!in) throw IoError("truncated snapshot header in " + path);

    Field f;
    f.spec = make_grid(static_cast<int>(d), static_cast<int>(n), length);
    f.values.resize(f.spec.point_count());
    for (Complex& v : f.values) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        v = Complex(re, im);
    }
    if (!in) throw IoError("truncated snapshot payload in " + path);
    return {std::move(f), t};
}

} // namespace smcf
