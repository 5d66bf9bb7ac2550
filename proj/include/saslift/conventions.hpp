#pragma once
// Sign and normalization conventions used across the library.  Everything
// downstream assumes exactly these; the unit suite pins each one with a
// worked example.
//
//   curvature      R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
//                  components R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//                            + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}.
//   lowered R      Rm(X,Y,Z,W) = g(R(X,Y)Z, W).
//   Ricci          Ric(Y,Z) = Tr{ X -> R(X,Y)Z }, positive on round spheres.
//   exterior d     half convention on 1-forms:
//                  (d a)(X,Y) = (X a(Y) - Y a(X) - a([X,Y])) / 2, i.e.
//                  (d a)_{ab} = (d_a a_b - d_b a_a) / 2.  Closedness of a
//                  2-form is tested with the plain cyclic sum
//                  d_a w_{bc} + d_b w_{ca} + d_c w_{ab}, whose vanishing is
//                  prefactor independent.
//   Kaehler form   w(X,Y) = g(X, JY); fundamental form Phi(X,Y) = g(X, phi Y).
//   potential      g = (Hess K + J^T Hess K J) / 2, so the flat potential
//                  K = |x|^2 / 2 yields the identity metric.
//   symmetric prod (a . b) = (a x b + b x a) / 2 for 1-forms ("odot").
//   soliton sign   Ric + L_X g / 2 = lambda g with lambda > 0 expanding,
//                  lambda = 0 steady, lambda < 0 shrinking.  Note this is the
//                  reverse of the other common convention.

namespace saslift::conventions {

/// Scale factor relating the half-convention exterior derivative of a 1-form
/// to the raw antisymmetrized partials.
inline constexpr double kExteriorHalf = 0.5;

}  // namespace saslift::conventions
