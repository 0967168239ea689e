#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ncsoliton/error.hpp"

namespace ncsoliton {

/// Finite truncation of a sequence on the half-lattice {0, 1, 2, ...}.
///
/// Holds the sites x = 0..X; everything beyond X is treated as zero by the
/// operators. `tail_l1` carries a certified bound on the l1 mass that the
/// truncation discarded (zero when unknown or not applicable).
template <typename T>
struct BasicLatticeVector {
    std::vector<T> values;
    double tail_l1 = 0.0;

    BasicLatticeVector() = default;
    explicit BasicLatticeVector(std::size_t truncation) : values(truncation + 1) {}
    explicit BasicLatticeVector(std::vector<T> v, double tail = 0.0)
        : values(std::move(v)), tail_l1(tail) {}

    /// Index X of the last stored site.
    std::size_t truncation() const { return values.empty() ? 0 : values.size() - 1; }
    std::size_t size() const { return values.size(); }

    T& operator[](std::size_t x) { return values[x]; }
    const T& operator[](std::size_t x) const { return values[x]; }

    std::span<const T> view() const { return values; }
    std::span<T> view() { return values; }
};

using LatticeVector = BasicLatticeVector<double>;
using ComplexLatticeVector = BasicLatticeVector<std::complex<double>>;

template <typename T>
void require_matching(const BasicLatticeVector<T>& u, const BasicLatticeVector<T>& v) {
    if (u.size() != v.size()) {
        throw DomainError("lattice vectors have different truncations");
    }
}

template <typename T>
bool all_finite(const BasicLatticeVector<T>& v) {
    return std::all_of(v.values.begin(), v.values.end(),
                       [](const T& z) { return std::isfinite(std::abs(z)); });
}

/// l1 norm of the stored sites (the tail bound is not added).
template <typename T>
double norm_l1(const BasicLatticeVector<T>& v) {
    double s = 0.0;
    for (const auto& z : v.values) s += std::abs(z);
    return s;
}

template <typename T>
double norm_l2(const BasicLatticeVector<T>& v) {
    double s = 0.0;
    for (const auto& z : v.values) s += std::norm(std::complex<double>(z));
    return std::sqrt(s);
}

template <typename T>
double norm_sup(const BasicLatticeVector<T>& v) {
    double s = 0.0;
    for (const auto& z : v.values) s = std::max(s, static_cast<double>(std::abs(z)));
    return s;
}

/// Pointwise power v(x)^p.
inline LatticeVector pointwise_pow(const LatticeVector& v, int p) {
    LatticeVector out(v.truncation());
    for (std::size_t x = 0; x < v.size(); ++x) {
        double r = 1.0;
        for (int k = 0; k < p; ++k) r *= v[x];
        out[x] = r;
    }
    return out;
}

inline LatticeVector pointwise_product(const LatticeVector& u, const LatticeVector& v) {
    require_matching(u, v);
    LatticeVector out(u.truncation());
    for (std::size_t x = 0; x < u.size(); ++x) out[x] = u[x] * v[x];
    return out;
}

/// Unit vector supported at `site`.
inline LatticeVector unit_vector(std::size_t site, std::size_t truncation) {
    LatticeVector out(truncation);
    if (site <= truncation) out[site] = 1.0;
    return out;
}

/// Projection P = I - P0 (zeroes site 0).
inline LatticeVector project_off_origin(LatticeVector v) {
    if (!v.values.empty()) v[0] = 0.0;
    return v;
}

}  // namespace ncsoliton
