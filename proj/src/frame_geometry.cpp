#include "conesmooth/frame_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conesmooth {

namespace {

using Table3 = std::array<std::array<std::array<double, 4>, 4>, 4>;

struct FrameValues {
    Jet rho;
    Jet phi;
};

FrameValues evaluate_checked(const ProfilePair& profile, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        std::ostringstream msg;
        msg << "radius must be positive and finite, got r = " << r;
        throw DomainError(msg.str());
    }
    FrameValues fv{profile.rho(r), profile.phi(r)};
    if (!(fv.rho.value > 0.0)) {
        std::ostringstream msg;
        msg << "rho^-1 undefined: rho(" << r << ") = " << fv.rho.value;
        throw DomainError(msg.str());
    }
    if (!(fv.phi.value > 0.0)) {
        std::ostringstream msg;
        msg << "phi^-1 undefined: phi(" << r << ") = " << fv.phi.value;
        throw DomainError(msg.str());
    }
    return fv;
}

void require_finite(double value, const char* what, double r) {
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << what << " is not finite at r = " << r;
        throw DomainError(msg.str());
    }
}

int levi_civita(int i, int j, int k) {
    // indices in {1,2,3}
    if (i == j || j == k || i == k) return 0;
    return ((i == 1 && j == 2) || (i == 2 && j == 3) || (i == 3 && j == 1)) ? 1 : -1;
}

// bracket[a][b][c] = <[e_a, e_b], e_c> for the orthonormal frame e_a = X_a / f_a.
Table3 frame_brackets(const FrameValues& fv) {
    const double rho = fv.rho.value;
    const double phi = fv.phi.value;
    const std::array<double, 4> f = {1.0, rho * phi, rho, rho};
    const std::array<double, 4> df = {0.0, fv.rho.d1 * phi + rho * fv.phi.d1, fv.rho.d1, fv.rho.d1};

    Table3 c{};
    for (int i = 1; i < 4; ++i) {
        // [d/dr, X_i / f_i] = -(f_i'/f_i) e_i
        c[0][i][i] = -df[i] / f[i];
        c[i][0][i] = df[i] / f[i];
    }
    for (int i = 1; i < 4; ++i) {
        for (int j = 1; j < 4; ++j) {
            for (int k = 1; k < 4; ++k) {
                const int eps = levi_civita(i, j, k);
                if (eps != 0) c[i][j][k] = 2.0 * eps * f[k] / (f[i] * f[j]);
            }
        }
    }
    return c;
}

// gamma[a][b][c] = <nabla_{e_a} e_b, e_c>
Table3 koszul(const Table3& c) {
    Table3 g{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int k = 0; k < 4; ++k)
                g[a][b][k] = 0.5 * (c[a][b][k] - c[b][k][a] + c[k][a][b]);
    return g;
}

Table3 connection_table(const ProfilePair& profile, double r) {
    return koszul(frame_brackets(evaluate_checked(profile, r)));
}

struct OraclePass {
    CurvatureForms forms;
    RicciDiag ricci;
};

OraclePass forms_pass(const ProfilePair& profile, double r, double h) {
    const FrameValues fv = evaluate_checked(profile, r);
    const Table3 bracket = frame_brackets(fv);
    const Table3 gamma = koszul(bracket);

    // Radial derivative of every connection coefficient, five-point stencil.
    const Table3 gm2 = connection_table(profile, r - 2.0 * h);
    const Table3 gm1 = connection_table(profile, r - h);
    const Table3 gp1 = connection_table(profile, r + h);
    const Table3 gp2 = connection_table(profile, r + 2.0 * h);
    Table3 dgamma{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int k = 0; k < 4; ++k)
                dgamma[a][b][k] =
                    (-gp2[a][b][k] + 8.0 * gp1[a][b][k] - 8.0 * gm1[a][b][k] + gm2[a][b][k]) / (12.0 * h);

    // w_i^j(e_a) = gamma[a][i][j]
    auto w = [&](int i, int j, int a) { return gamma[a][i][j]; };
    auto dw_radial = [&](int i, int j, int a) { return dgamma[a][i][j]; };

    // Omega_i^j(e_a, e_b) = dw_i^j(e_a, e_b) - sum_k (w_i^k ^ w_k^j)(e_a, e_b)
    auto omega = [&](int i, int j, int a, int b) {
        double d = 0.0;
        if (a == 0) d += dw_radial(i, j, b);
        if (b == 0) d -= dw_radial(i, j, a);
        for (int m = 0; m < 4; ++m) d -= bracket[a][b][m] * w(i, j, m);
        double wedge = 0.0;
        for (int k = 0; k < 4; ++k) wedge += w(i, k, a) * w(k, j, b) - w(i, k, b) * w(k, j, a);
        return d - wedge;
    };

    OraclePass out;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b)
                    out.forms.coeff[pair_index(i, j)][pair_index(a, b)] = omega(i, j, a, b);

    // Ric(e_l, e_l) = sum_k <R(e_l, e_k) e_k, e_l> = sum_k Omega_k^l(e_l, e_k)
    std::array<double, 4> ric{};
    for (int l = 0; l < 4; ++l)
        for (int k = 0; k < 4; ++k)
            if (k != l) ric[l] += omega(k, l, l, k);
    out.ricci = {ric[0], ric[1], ric[2], ric[3]};
    return out;
}

} // namespace

double CurvatureForms::operator()(std::size_t i, std::size_t j, std::size_t a, std::size_t b) const {
    if (i == j || a == b) return 0.0;
    double sign = 1.0;
    if (i > j) {
        std::swap(i, j);
        sign = -sign;
    }
    if (a > b) {
        std::swap(a, b);
        sign = -sign;
    }
    return sign * coeff[pair_index(i, j)][pair_index(a, b)];
}

double CurvatureForms::max_abs() const {
    double m = 0.0;
    for (const auto& row : coeff)
        for (double v : row) m = std::max(m, std::abs(v));
    return m;
}

RicciDiag ricci_diag(const ProfilePair& profile, double r) {
    const FrameValues fv = evaluate_checked(profile, r);
    const double rho = fv.rho.value, drho = fv.rho.d1, ddrho = fv.rho.d2;
    const double phi = fv.phi.value, dphi = fv.phi.d1, ddphi = fv.phi.d2;
    const double irho = 1.0 / rho;
    const double iphi = 1.0 / phi;
    const double irho2 = irho * irho;
    const double cross = irho * iphi * drho * dphi;

    RicciDiag out;
    out.r00 = -(3.0 * irho * ddrho + iphi * ddphi + 2.0 * cross);
    out.r11 = -(irho * ddrho + iphi * ddphi + 4.0 * cross - 2.0 * irho2 * phi * phi +
                2.0 * irho2 * drho * drho);
    out.r22 = -irho * ddrho - cross + 4.0 * irho2 - 2.0 * irho2 * phi * phi - 2.0 * irho2 * drho * drho;
    out.r33 = out.r22;

    require_finite(out.r00, "Ric(e0,e0)", r);
    require_finite(out.r11, "Ric(e1,e1)", r);
    require_finite(out.r22, "Ric(e2,e2)", r);
    return out;
}

FrameConnection connection_forms(const ProfilePair& profile, double r, ConnectionTable table) {
    const FrameValues fv = evaluate_checked(profile, r);
    const double rho = fv.rho.value;
    const double phi = fv.phi.value;
    const double log_rho = fv.rho.d1 / rho;

    FrameConnection c;
    c.c01 = log_rho + fv.phi.d1 / phi;
    c.c02 = log_rho;
    c.c03 = log_rho;
    c.c12 = phi / rho;
    c.c13 = -phi / rho;
    c.c23 = table == ConnectionTable::displayed ? 2.0 / (rho * phi) + phi / rho
                                                : 2.0 / (rho * phi) - phi / rho;
    require_finite(c.c01, "w_0^1", r);
    require_finite(c.c23, "w_2^3", r);
    return c;
}

FrameConnection numeric_connection(const ProfilePair& profile, double r) {
    const Table3 g = connection_table(profile, r);
    // w_i^j(e_a) = g[a][i][j]
    FrameConnection c;
    c.c01 = g[1][0][1];
    c.c02 = g[2][0][2];
    c.c03 = g[3][0][3];
    c.c12 = g[3][1][2];
    c.c13 = g[2][1][3];
    c.c23 = g[1][2][3];
    return c;
}

FormsOracleResult curvature_from_forms(const ProfilePair& profile, double r, double h,
                                       double step_tolerance) {
    if (!(h > 0.0) || !(r - 2.0 * h > 0.0)) {
        std::ostringstream msg;
        msg << "finite-difference stencil leaves r > 0: r = " << r << ", h = " << h;
        throw DomainError(msg.str());
    }
    const OraclePass fine = forms_pass(profile, r, h);
    FormsOracleResult out{fine.forms, fine.ricci, 0.0, true};

    if (r - 4.0 * h > 0.0) {
        const OraclePass coarse = forms_pass(profile, r, 2.0 * h);
        double scale = 1.0;
        for (std::size_t i = 0; i < 4; ++i) {
            out.step_error = std::max(out.step_error, std::abs(fine.ricci[i] - coarse.ricci[i]));
            scale = std::max(scale, std::abs(fine.ricci[i]));
        }
        out.step_ok = out.step_error <= step_tolerance * scale;
    }
    return out;
}

double metric_eval(const ProfilePair& profile, double r, const std::array<double, 4>& v) {
    const double rho = profile.rho(r).value;
    const double phi = profile.phi(r).value;
    const double rho2 = rho * rho;
    const double out =
        v[0] * v[0] + rho2 * phi * phi * v[1] * v[1] + rho2 * v[2] * v[2] + rho2 * v[3] * v[3];
    require_finite(out, "metric value", r);
    return out;
}

} // namespace conesmooth
