#pragma once

// Random fixtures and small helpers shared by the unit tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "qspec/linalg.hpp"

namespace testutil {

using qspec::Complex;
using qspec::ComplexMatrix;
using qspec::ComplexVector;
using qspec::RealVector;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double normal() { return dist_(gen_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    Complex complex_normal() { return {normal(), normal()}; }

    ComplexVector vector(Eigen::Index n) {
        ComplexVector v(n);
        for (Eigen::Index k = 0; k < n; ++k) v(k) = complex_normal();
        return v;
    }

    ComplexMatrix ginibre(Eigen::Index n) {
        ComplexMatrix m(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i) m(i, j) = complex_normal();
        return m / std::sqrt(2.0 * double(n));
    }

    ComplexMatrix hermitian(Eigen::Index n) {
        const ComplexMatrix m = ginibre(n);
        return (m + m.adjoint()) / 2.0;
    }

    ComplexMatrix unitary(Eigen::Index n) {
        Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(n));
        return qr.householderQ() * ComplexMatrix::Identity(n, n);
    }

    ComplexMatrix conditioned(Eigen::Index n, double cond_max) {
        RealVector s(n);
        for (Eigen::Index k = 0; k < n; ++k) s(k) = uniform(1.0, cond_max);
        return unitary(n) * s.cast<Complex>().asDiagonal() * unitary(n);
    }

    // Hermitian positive definite with eigenvalues in [1, cond_max], both ends attained.
    ComplexMatrix positive(Eigen::Index n, double cond_max) {
        RealVector d(n);
        for (Eigen::Index k = 0; k < n; ++k) d(k) = std::exp(uniform(0.0, std::log(cond_max)));
        d(0) = 1.0;
        d(n - 1) = cond_max;
        const ComplexMatrix u = unitary(n);
        const ComplexMatrix g = u * d.cast<Complex>().asDiagonal() * u.adjoint();
        return (g + g.adjoint()) / 2.0;
    }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> dist_;
};

inline std::vector<Complex> sorted(const ComplexVector& v) {
    std::vector<Complex> out(v.data(), v.data() + v.size());
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

// Largest distance in a greedy nearest-neighbour pairing of two eigenvalue lists.
inline double matching_distance(const ComplexVector& x, const ComplexVector& y) {
    std::vector<bool> used(std::size_t(y.size()), false);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (Eigen::Index j = 0; j < y.size(); ++j) {
            if (used[std::size_t(j)]) continue;
            const double d = std::abs(x(i) - y(j));
            if (d < best) {
                best = d;
                arg = std::size_t(j);
            }
        }
        used[arg] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace testutil
