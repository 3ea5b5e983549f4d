#pragma once

namespace mop::numerics {

struct AiryValue {
  double value;       // Ai(x)
  double derivative;  // Ai'(x)
};

// Ai(x) and Ai'(x) for |x| <= 40.
//
// Near the origin the values come from a Taylor expansion about the closest
// point of a fixed anchor table on [-8, 8] (spacing 1/2). The anchors are built
// once: the negative half by stepping the Airy ODE leftwards from the exact
// values at 0, the positive half by stepping leftwards from the asymptotic
// expansion at x = 8 (the recessive direction for Ai). Beyond |x| = 8 the
// Poincare asymptotic expansions are used, truncated at the smallest term.
AiryValue airy_ai(double x);

inline constexpr double airy_max_argument = 40.0;

// ln Gamma(x) for x > 0 (Lanczos, g = 7, nine-term coefficient set).
double log_gamma(double x);

// Modified Bessel function of the first kind I_alpha(x), alpha > -1, x >= 0.
double bessel_i(double alpha, double x);

// ln I_alpha(x); remains finite where I_alpha(x) itself would overflow.
double log_bessel_i(double alpha, double x);

}  // namespace mop::numerics
