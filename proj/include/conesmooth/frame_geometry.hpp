#pragma once

#include <array>
#include <cstddef>

#include "conesmooth/profile.hpp"

namespace conesmooth {

/// Diagonal Ricci entries of g_{rho,phi} in the orthonormal frame
///   e0 = d/dr, e1 = X1/(rho phi), e2 = X2/rho, e3 = X3/rho.
/// Off-diagonal entries vanish by symmetry of the ansatz.
struct RicciDiag {
    double r00 = 0.0;
    double r11 = 0.0;
    double r22 = 0.0;
    double r33 = 0.0;

    double operator[](std::size_t i) const {
        switch (i) {
        case 0: return r00;
        case 1: return r11;
        case 2: return r22;
        default: return r33;
        }
    }
};

/// Connection one-forms, each a single multiple of a coframe element:
///   w_0^1 = c01 w^1, w_0^2 = c02 w^2, w_0^3 = c03 w^3,
///   w_1^2 = c12 w^3, w_1^3 = c13 w^2, w_2^3 = c23 w^1.
struct FrameConnection {
    double c01 = 0.0;
    double c02 = 0.0;
    double c03 = 0.0;
    double c12 = 0.0;
    double c13 = 0.0;
    double c23 = 0.0;
};

/// Two readings of the w_2^3 coefficient exist: the one in the table of
/// connection forms, 2/(rho phi) + phi/rho, and the one implied by the
/// covariant derivative table, 2/(rho phi) - phi/rho. The Koszul oracle
/// reproduces the second; see tests/test_frame_geometry.cpp.
enum class ConnectionTable { displayed, covariant_derivative };

/// Index of the pair (i, j), i < j, in the order 01, 02, 03, 12, 13, 23.
constexpr std::size_t pair_index(std::size_t i, std::size_t j) {
    constexpr std::size_t table[4][4] = {{6, 0, 1, 2}, {0, 6, 3, 4}, {1, 3, 6, 5}, {2, 4, 5, 6}};
    return table[i][j];
}

/// Curvature two-forms Omega_i^j (i < j) expanded in {w^a ^ w^b : a < b}.
struct CurvatureForms {
    // coeff[pair_index(i,j)][pair_index(a,b)]
    std::array<std::array<double, 6>, 6> coeff{};

    /// Omega_i^j(e_a, e_b), with antisymmetry in (i, j) and in (a, b).
    double operator()(std::size_t i, std::size_t j, std::size_t a, std::size_t b) const;

    double max_abs() const;
};

struct FormsOracleResult {
    CurvatureForms forms;
    RicciDiag ricci;
    // |Ricci(h) - Ricci(2h)|, max over entries.
    double step_error = 0.0;
    bool step_ok = true;
};

/// Closed-form diagonal Ricci tensor.
RicciDiag ricci_diag(const ProfilePair& profile, double r);

/// The six closed-form connection coefficients.
FrameConnection connection_forms(const ProfilePair& profile, double r,
                                 ConnectionTable table = ConnectionTable::displayed);

/// Connection coefficients obtained numerically from the frame brackets via
/// the Koszul formula. Uses only rho, phi and their first derivatives.
FrameConnection numeric_connection(const ProfilePair& profile, double r);

/// Independent curvature pipeline: brackets -> Koszul connection -> finite
/// differences in r for dw_i^j -> Omega = dw - w ^ w -> Ricci contraction.
/// step_tolerance bounds the disagreement between steps h and 2h, relative
/// to max(1, |Ric|).
FormsOracleResult curvature_from_forms(const ProfilePair& profile, double r, double h = 1e-4,
                                       double step_tolerance = 1e-6);

/// Squared length of a0 X0 + a1 X1 + a2 X2 + a3 X3.
double metric_eval(const ProfilePair& profile, double r, const std::array<double, 4>& v);

} // namespace conesmooth
