#pragma once

// Central tolerance table.  Every residual check in the library and the CLI
// quotes one of these constants, so there is a single audit point.

namespace fellq::tol {

// Identities that reduce to exact phase bookkeeping (index permutations,
// pointwise products, FFT round trips on band-limited data).
inline constexpr double kExactPhase = 1e-12;

// Identities mediated by trigonometric interpolation at non-aligned shifts.
inline constexpr double kInterp = 1e-10;

// Bounds involving second derivatives (Taylor remainders, Leibniz sums).
inline constexpr double kSecondDeriv = 1e-9;

// Fourier tail decay of smooth (non-band-limited) test bumps.
inline constexpr double kSmoothTail = 1e-8;

// Log-log slope of first-order remainder scans.
inline constexpr double kSlopeTarget = 1.0;
inline constexpr double kSlopeWindow = 0.05;

// Threshold below which accumulated fibers are dropped from graded supports.
inline constexpr double kZeroDrop = 1e-15;

// Trial-sampling noise allowance for adjoint symmetry of norm lower bounds.
inline constexpr double kTrialNoise = 1e-6;

}  // namespace fellq::tol
