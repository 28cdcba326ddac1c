#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "density_matrix.hpp"
#include "errors.hpp"
#include "grid.hpp"

namespace sfent {

namespace io {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_le(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::array<unsigned char, sizeof(T)> b;
        std::memcpy(b.data(), &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b.data(), sizeof(T));
    }
    return v;
}

template <class T>
void put(std::ostream& os, T v) {
    v = to_le(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("truncated snapshot");
    return to_le(v);
}

inline void put_complex(std::ostream& os, const cplx* p, std::size_t n) {
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(cplx)));
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            put(os, p[i].real());
            put(os, p[i].imag());
        }
    }
}

inline void get_complex(std::istream& is, cplx* p, std::size_t n) {
    if constexpr (std::endian::native == std::endian::little) {
        is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(cplx)));
        if (!is) throw std::runtime_error("truncated snapshot");
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double re = get<double>(is);
            p[i] = cplx(re, get<double>(is));
        }
    }
}

inline void check_magic(std::istream& is, const char* magic) {
    char m[4];
    is.read(m, 4);
    if (!is || std::memcmp(m, magic, 4) != 0) throw std::runtime_error(std::string("not an ") + magic + " file");
}

}  // namespace io

/**
 * @brief SFW1 layout (little endian): "SFW1", uint32 version = 1, int32 n_z,
 * int32 n_rho, then doubles dz, drho, z_min, t, mu, then n_z * n_rho (re, im)
 * pairs with rho fastest.
 */
inline void write_sfw1(std::ostream& os, const WaveField& psi, double mu) {
    os.write("SFW1", 4);
    io::put<std::uint32_t>(os, 1);
    io::put<std::int32_t>(os, psi.grid.n_z);
    io::put<std::int32_t>(os, psi.grid.n_rho);
    io::put(os, psi.grid.dz);
    io::put(os, psi.grid.drho);
    io::put(os, psi.grid.z_min);
    io::put(os, psi.t);
    io::put(os, mu);
    io::put_complex(os, psi.amp.data(), psi.amp.size());
    if (!os) throw std::runtime_error("write failure");
}

inline void write_sfw1(const std::string& path, const WaveField& psi, double mu) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_sfw1(os, psi, mu);
}

struct Snapshot {
    WaveField psi;
    double mu = 0.0;
};

inline Snapshot read_sfw1(std::istream& is) {
    io::check_magic(is, "SFW1");
    if (io::get<std::uint32_t>(is) != 1) throw std::runtime_error("unsupported SFW1 version");
    CylGrid g;
    g.n_z = io::get<std::int32_t>(is);
    g.n_rho = io::get<std::int32_t>(is);
    g.dz = io::get<double>(is);
    g.drho = io::get<double>(is);
    g.z_min = io::get<double>(is);
    g.validate();
    Snapshot s;
    s.psi = WaveField(g, io::get<double>(is));
    s.mu = io::get<double>(is);
    io::get_complex(is, s.psi.amp.data(), s.psi.amp.size());
    return s;
}

inline Snapshot read_sfw1(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return read_sfw1(is);
}

/**
 * @brief SDM1 layout (little endian): "SDM1", uint32 version = 1, char[8] label
 * (zero padded), int32 n, doubles origin, spacing, t, then n * n (re, im) pairs
 * row-major, then the n quadrature weights.
 */
inline void write_sdm1(std::ostream& os, const DensityMatrix& dm) {
    os.write("SDM1", 4);
    io::put<std::uint32_t>(os, 1);
    std::array<char, 8> label{};
    const std::string l = to_string(dm.label);
    std::memcpy(label.data(), l.data(), std::min(l.size(), label.size()));
    os.write(label.data(), label.size());
    io::put<std::int32_t>(os, dm.n());
    io::put(os, dm.grid.origin);
    io::put(os, dm.grid.spacing);
    io::put(os, dm.t);
    std::vector<cplx> row(dm.n());
    for (int a = 0; a < dm.n(); ++a) {
        for (int b = 0; b < dm.n(); ++b) row[b] = dm.mat(a, b);
        io::put_complex(os, row.data(), row.size());
    }
    for (double w : dm.grid.weights) io::put(os, w);
    if (!os) throw std::runtime_error("write failure");
}

inline void write_sdm1(const std::string& path, const DensityMatrix& dm) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_sdm1(os, dm);
}

inline DensityMatrix read_sdm1(std::istream& is) {
    io::check_magic(is, "SDM1");
    if (io::get<std::uint32_t>(is) != 1) throw std::runtime_error("unsupported SDM1 version");
    std::array<char, 9> label{};
    is.read(label.data(), 8);
    DensityMatrix dm;
    dm.label = dm_label_from_string(std::string(label.data()));
    const int n = io::get<std::int32_t>(is);
    if (n < 0) throw std::runtime_error("corrupt SDM1 size");
    dm.grid.n = n;
    dm.grid.origin = io::get<double>(is);
    dm.grid.spacing = io::get<double>(is);
    dm.t = io::get<double>(is);
    dm.mat.resize(n, n);
    std::vector<cplx> row(n);
    for (int a = 0; a < n; ++a) {
        io::get_complex(is, row.data(), row.size());
        for (int b = 0; b < n; ++b) dm.mat(a, b) = row[b];
    }
    dm.grid.weights.resize(n);
    for (auto& w : dm.grid.weights) w = io::get<double>(is);
    return dm;
}

inline DensityMatrix read_sdm1(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return read_sdm1(is);
}

}  // namespace sfent
