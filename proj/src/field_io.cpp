#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "qcircle/errors.hpp"
#include "qcircle/field.hpp"

namespace qcircle {

namespace {
template <typename T>
void put_le(std::ostream& os, T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    os.write(b, sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
    char b[sizeof(T)];
    if (!is.read(b, sizeof(T))) throw DomainError("field file truncated");
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}
}  // namespace

void write_binary(const ComplexField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DomainError("cannot open " + path + " for writing");
    put_le<double>(os, f.grid.half_width());
    put_le<std::uint64_t>(os, f.grid.n());
    put_le<double>(os, Grid::stagger);
    for (const auto& v : f.values) {
        put_le<double>(os, v.real());
        put_le<double>(os, v.imag());
    }
    if (!os) throw DomainError("write failed: " + path);
}

ComplexField read_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DomainError("cannot open field file " + path);
    const double L = get_le<double>(is);
    const auto n = get_le<std::uint64_t>(is);
    const double stagger = get_le<double>(is);
    if (stagger != Grid::stagger) throw DomainError("field file has unsupported stagger");
    if (n > (1u << 14)) throw DomainError("field file grid too large");
    Grid g(L, static_cast<std::size_t>(n));
    ComplexField f(g);
    for (auto& v : f.values) {
        const double re = get_le<double>(is);
        const double im = get_le<double>(is);
        v = {re, im};
    }
    f.require_finite("field file");
    return f;
}

void write_csv(const ComplexField& f, std::ostream& os) {
    os << "x,y,re,im\n" << std::setprecision(17);
    for (std::size_t k = 0; k < f.grid.n(); ++k)
        for (std::size_t j = 0; j < f.grid.n(); ++j) {
            const cplx v = f.at(j, k);
            os << f.grid.x(j) << ',' << f.grid.y(k) << ',' << v.real() << ',' << v.imag() << '\n';
        }
}

void write_csv(const ComplexField& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw DomainError("cannot open " + path + " for writing");
    write_csv(f, os);
}

}  // namespace qcircle
