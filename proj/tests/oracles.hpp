// Test-only reference implementations, independent of the closed-form
// probabilities in qest/physics.hpp.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace qest::oracle {

using cplx = std::complex<double>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;
using Mat3 = std::array<std::array<cplx, 3>, 3>;

inline Mat2 mul(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

// exp(M) for a 2x2 complex matrix by scaling-and-squaring with a Taylor
// series. Accurate to ~1e-13 for the norms arising here.
inline Mat2 expm(Mat2 m) {
    double norm = 0.0;
    for (const auto& row : m)
        for (const auto& v : row) norm = std::max(norm, std::abs(v));
    int squarings = 0;
    while (norm > 0.5) {
        norm *= 0.5;
        ++squarings;
    }
    const double scale = std::ldexp(1.0, -squarings);
    for (auto& row : m)
        for (auto& v : row) v *= scale;

    Mat2 result{{{cplx(1.0), cplx(0.0)}, {cplx(0.0), cplx(1.0)}}};
    Mat2 term = result;
    for (int k = 1; k <= 24; ++k) {
        term = mul(term, m);
        const double inv_k = 1.0 / static_cast<double>(k);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                term[i][j] *= inv_k;  // term holds m^k / k!
                result[i][j] += term[i][j];
            }
    }
    for (int s = 0; s < squarings; ++s) result = mul(result, result);
    return result;
}

// Probability of remaining in the qubit-excited state after evolving |10>
// for time t under H' = (delta/2) eta_z + g eta_x, via numerical matrix
// exponentiation of -i H' t.
inline double excitation_probability_unitary(double g, double delta, double t) {
    const cplx mi(0.0, -1.0);
    Mat2 m{{{mi * (0.5 * delta * t), mi * (g * t)},
            {mi * (g * t), mi * (-0.5 * delta * t)}}};
    const Mat2 u = expm(m);
    return std::norm(u[0][0]);
}

namespace detail {

inline Mat3 lindblad_rhs(const Mat3& rho, double g, double delta, double gamma) {
    // Basis {|00>, |01>, |10>}; H couples |01> and |10>, the amplitude
    // damping operator maps |10> -> |00> at rate gamma. |00> coherences
    // with the subspace never arise, so its energy can be set to zero.
    Mat3 h{};
    h[1][1] = -0.5 * delta;
    h[2][2] = 0.5 * delta;
    h[1][2] = g;
    h[2][1] = g;

    Mat3 out{};
    const cplx mi(0.0, -1.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cplx comm(0.0);
            for (int k = 0; k < 3; ++k) comm += h[i][k] * rho[k][j] - rho[i][k] * h[k][j];
            out[i][j] = mi * comm;
        }
    // A rho A^dagger = gamma * rho_{10,10} |00><00|
    out[0][0] += gamma * rho[2][2];
    // -1/2 {A^dagger A, rho} with A^dagger A = gamma |10><10|
    for (int j = 0; j < 3; ++j) out[2][j] -= 0.5 * gamma * rho[2][j];
    for (int i = 0; i < 3; ++i) out[i][2] -= 0.5 * gamma * rho[i][2];
    return out;
}

inline Mat3 axpy(const Mat3& a, const Mat3& b, double s) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = a[i][j] + s * b[i][j];
    return c;
}

}  // namespace detail

// Occupation of |10> after time t under the amplitude-damped master
// equation, integrated with fixed-step RK4 (no rotating-wave approximation).
inline double excitation_probability_lindblad(double g, double delta, double t,
                                              double t1) {
    const double gamma = 1.0 / t1;
    Mat3 rho{};
    rho[2][2] = 1.0;
    if (t == 0.0) return 1.0;
    const double omega_rabi = std::sqrt(delta * delta + 4.0 * g * g);
    const std::size_t steps = static_cast<std::size_t>(
        std::ceil(t * (omega_rabi + gamma) * 40.0)) + 200;
    const double dt = t / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s) {
        const Mat3 k1 = detail::lindblad_rhs(rho, g, delta, gamma);
        const Mat3 k2 = detail::lindblad_rhs(detail::axpy(rho, k1, 0.5 * dt), g, delta, gamma);
        const Mat3 k3 = detail::lindblad_rhs(detail::axpy(rho, k2, 0.5 * dt), g, delta, gamma);
        const Mat3 k4 = detail::lindblad_rhs(detail::axpy(rho, k3, dt), g, delta, gamma);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                rho[i][j] += dt / 6.0 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]);
    }
    return rho[2][2].real();
}

}  // namespace qest::oracle
