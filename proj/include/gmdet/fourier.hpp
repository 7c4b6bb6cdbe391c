#pragma once

#include <random>
#include <vector>

#include "gmdet/connection.hpp"

namespace gmdet {

/// Psi = sum_x sum_i g^x_i dz/(z-x)^i + sum_{k>=2} g^inf_k z^{k-2} dz with
/// constant r x r matrices. The Fourier twist adds dz/t - z dt/t^2.
struct FourierPole {
    RF point;
    std::vector<RMatrix> g;  // g[i-1] = g^x_i, i = 1..m_x
};

struct FourierData {
    std::size_t rank = 1;
    std::vector<FourierPole> poles;
    std::vector<RMatrix> g_inf;  // g_inf[k-2] = g^inf_k; empty when Psi has order <= 1 at infinity

    /// Pole order of Psi at infinity; 1 stands for "at most 1".
    int m_inf() const { return g_inf.empty() ? 1 : static_cast<int>(g_inf.size()) + 1; }
};

/// Base t, fiber z.
ScalarTower fourier_tower();

/// Throws malformed-input on shape errors or non-constant matrices.
void validate(const FourierData& data);

/// Connection on the total space with D = sum m_x (x) + max(2, m_inf) (infinity).
ConnectionSpec fourier_spec(const FourierData& data);

/// Closed form of det H^* = -Tr of the GM matrix:
///   m_inf <= 1:  (sum r m_x x) dt/t^2 - Tr(sum g^x_1) dt/t
///   m_inf  = 2:  (sum r m_x x - sum Tr((g^inf_2 + 1/t)^{-1} g^x_1)) dt/t^2
///   m_inf >= 3:  (sum r m_x x - Tr((g^inf_m)^{-1} h)) dt/t^2, h = g^inf_{m-1}
///                (plus 1/t when m_inf = 3, where the twist lands in that slot)
BaseForm fourier_closed_form(const FourierData& data);

enum class FourierRegime { AtMostOne, Two, AtLeastThree };
const char* to_string(FourierRegime r);

/// Random admissible instance: r in {1,2,3}, 1..3 finite poles with
/// m_x <= 3, small integer matrices with invertible leading terms.
FourierData random_fourier(std::mt19937& rng, FourierRegime regime);

}  // namespace gmdet
