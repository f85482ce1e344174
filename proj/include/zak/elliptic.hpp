/// @file elliptic.hpp
/// @brief Jacobi elliptic functions and elliptic integrals in the parameter
///        convention: q multiplies sin^2(theta), q in [0,1).
///
/// q is the parameter (the "m" of standard references), never the modulus k.
/// Inputs with q > 1 - 1e-12 are rejected; the soliton parameter solve clamps
/// its search to that range and carries the achieved residual instead of
/// silently losing precision here.
///
/// The *_comp variants take the complementary parameter qc = 1 - q directly,
/// which preserves full relative precision when q is within a few ulp of 1.

#pragma once

namespace zak::elliptic {

/// Largest admissible parameter; q beyond this is a domain error.
inline constexpr double kMaxParameter = 1.0 - 1e-12;

struct SnCnDn {
    double sn, cn, dn;
};

/// Complete elliptic integral of the first kind,
/// K(q) = int_0^{pi/2} dtheta / sqrt(1 - q sin^2 theta).
double complete_K(double q);
double complete_K_comp(double qc);

/// Jacobi sn, cn, dn at argument u.  sn = sin(phi), cn = cos(phi),
/// dn = sqrt(1 - q sin^2 phi) with u = int_0^phi dtheta/sqrt(1 - q sin^2).
SnCnDn jacobi_snd(double u, double q);
SnCnDn jacobi_snd_comp(double u, double qc);

/// Incomplete elliptic integral of the second kind,
/// E2(phi, q) = int_0^phi sqrt(1 - q sin^2 theta) dtheta, any real phi
/// (extended by E2(phi + pi) = E2(phi) + 2 E2(pi/2)).
double incomplete_E2(double phi, double q);
double incomplete_E2_comp(double phi, double qc);

/// E2(pi/2, q), the complete integral of the second kind.
double complete_E2(double q);
double complete_E2_comp(double qc);

/// Carlson symmetric forms (exposed for the test oracles).
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);

}  // namespace zak::elliptic
