#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <string>

#include "wturb/core.hpp"

namespace wturb {

// Maximum space dimension / component count handled by the fixed-size
// vector types below. The models in scope use d <= 2, D <= 2.
inline constexpr int kMaxDim = 3;

// Integer lattice vector k in Z^d. Frequencies are xi = k / L.
struct KVec {
    std::array<std::int32_t, kMaxDim> c{0, 0, 0};
    std::int8_t dim = 1;

    KVec() = default;
    explicit KVec(int d) : dim(static_cast<std::int8_t>(d)) {}
    KVec(int d, std::int32_t x0, std::int32_t x1 = 0, std::int32_t x2 = 0)
        : c{x0, x1, x2}, dim(static_cast<std::int8_t>(d)) {}

    std::int32_t operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    std::int32_t& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    bool is_zero() const {
        for (int i = 0; i < dim; ++i)
            if (c[static_cast<std::size_t>(i)] != 0) return false;
        return true;
    }

    KVec operator-() const {
        KVec r(*this);
        for (int i = 0; i < dim; ++i) r[i] = -r[i];
        return r;
    }
    KVec operator+(const KVec& o) const {
        KVec r(*this);
        for (int i = 0; i < dim; ++i) r[i] += o[i];
        return r;
    }
    KVec operator-(const KVec& o) const {
        KVec r(*this);
        for (int i = 0; i < dim; ++i) r[i] -= o[i];
        return r;
    }
    KVec& operator+=(const KVec& o) {
        for (int i = 0; i < dim; ++i) c[static_cast<std::size_t>(i)] += o[i];
        return *this;
    }

    bool operator==(const KVec& o) const {
        if (dim != o.dim) return false;
        for (int i = 0; i < dim; ++i)
            if (c[static_cast<std::size_t>(i)] != o[i]) return false;
        return true;
    }
    bool operator!=(const KVec& o) const { return !(*this == o); }
    bool operator<(const KVec& o) const {
        for (int i = 0; i < dim; ++i) {
            if (c[static_cast<std::size_t>(i)] != o[i])
                return c[static_cast<std::size_t>(i)] < o[i];
        }
        return false;
    }

    // The half-space rule used for Gaussian sampling: k is "positive" if its
    // first nonzero coordinate is positive.
    bool positive_half() const {
        for (int i = 0; i < dim; ++i) {
            if (c[static_cast<std::size_t>(i)] > 0) return true;
            if (c[static_cast<std::size_t>(i)] < 0) return false;
        }
        return false;  // zero vector
    }

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < dim; ++i) {
            if (i) s += ",";
            s += std::to_string(c[static_cast<std::size_t>(i)]);
        }
        return s + ")";
    }
};

struct KVecHash {
    std::size_t operator()(const KVec& k) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(k.dim);
        for (int i = 0; i < k.dim; ++i) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(k[i])) + 0x9e3779b97f4a7c15ull +
                 (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

// Real frequency vector xi in R^d.
struct RVec {
    std::array<double, kMaxDim> c{0.0, 0.0, 0.0};
    std::int8_t dim = 1;

    RVec() = default;
    explicit RVec(int d) : dim(static_cast<std::int8_t>(d)) {}
    RVec(int d, double x0, double x1 = 0.0, double x2 = 0.0)
        : c{x0, x1, x2}, dim(static_cast<std::int8_t>(d)) {}

    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    RVec operator+(const RVec& o) const {
        RVec r(*this);
        for (int i = 0; i < dim; ++i) r[i] += o[i];
        return r;
    }
    double norm2() const {
        double s = 0;
        for (int i = 0; i < dim; ++i) s += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }
    // Japanese bracket <xi> = sqrt(1 + |xi|^2).
    double bracket() const { return std::sqrt(1.0 + norm2()); }
};

inline RVec to_frequency(const KVec& k, double L) {
    RVec r(k.dim);
    for (int i = 0; i < k.dim; ++i) r[i] = static_cast<double>(k[i]) / L;
    return r;
}

// Small complex vector in C^D (field components at one Fourier mode).
struct CVec {
    std::array<Cplx, kMaxDim> c{};
    std::int8_t dim = 1;

    CVec() = default;
    explicit CVec(int D) : dim(static_cast<std::int8_t>(D)) {}
    CVec(int D, Cplx x0, Cplx x1 = 0.0, Cplx x2 = 0.0)
        : c{x0, x1, x2}, dim(static_cast<std::int8_t>(D)) {}

    Cplx operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    Cplx& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    CVec& operator+=(const CVec& o) {
        for (int i = 0; i < dim; ++i) c[static_cast<std::size_t>(i)] += o[i];
        return *this;
    }
    CVec operator+(const CVec& o) const {
        CVec r(*this);
        r += o;
        return r;
    }
    CVec operator*(Cplx s) const {
        CVec r(*this);
        for (int i = 0; i < dim; ++i) r[i] *= s;
        return r;
    }
    double norm() const {
        double s = 0;
        for (int i = 0; i < dim; ++i) s += std::norm(c[static_cast<std::size_t>(i)]);
        return std::sqrt(s);
    }
    bool is_zero() const {
        for (int i = 0; i < dim; ++i)
            if (c[static_cast<std::size_t>(i)] != 0.0) return false;
        return true;
    }
};

// Real amplitude vector in R^D.
struct DVec {
    std::array<double, kMaxDim> c{};
    std::int8_t dim = 1;

    DVec() = default;
    explicit DVec(int D) : dim(static_cast<std::int8_t>(D)) {}
    DVec(int D, double x0, double x1 = 0.0, double x2 = 0.0)
        : c{x0, x1, x2}, dim(static_cast<std::int8_t>(D)) {}

    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    double norm() const {
        double s = 0;
        for (int i = 0; i < dim; ++i) s += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
        return std::sqrt(s);
    }
    bool is_zero() const {
        for (int i = 0; i < dim; ++i)
            if (c[static_cast<std::size_t>(i)] != 0.0) return false;
        return true;
    }
    CVec as_complex() const {
        CVec r(dim);
        for (int i = 0; i < dim; ++i) r[i] = c[static_cast<std::size_t>(i)];
        return r;
    }
};

}  // namespace wturb
