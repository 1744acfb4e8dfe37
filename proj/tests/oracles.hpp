#pragma once

// Reference values frozen from tests/oracles/oracle_values.cpp (long double,
// independent code) and cross-checked against a 40-digit mpmath evaluation.
namespace oracle {

inline constexpr double kGammaTwoThirds = 1.3541179394264004169;
inline constexpr double kLogGammaTwoThirds = 0.30315027514752356868;
inline constexpr double kHyp1f1 = 1.2286086715170009471;  // ₁F₁(5/6; 2/3; 1/6)
inline constexpr double kPsi0_5 = 0.77873651109352133311;
inline constexpr double kPsi1 = 0.62403766364542540311;
inline constexpr double kPsi2 = 0.42958856581300620286;
inline constexpr double kPsi4 = 0.24740080163493095261;
inline constexpr double kPsi8 = 0.12424261269461081038;
inline constexpr double kPsi1PlusIRe = 0.54487536981987747388;
inline constexpr double kPsi1PlusIIm = -0.23812823993844275243;
inline constexpr double kConjecturePrefactor = 1.7737553284091567166;

// First four moments
inline constexpr double kSqrt2Pi = 2.5066282746310005024;
inline constexpr double kMoment1 = 4.0 / (3.0 * kSqrt2Pi);
inline constexpr double kMoment2 = 5.0 / 12.0;
inline constexpr double kMoment3 = 64.0 / (63.0 * kSqrt2Pi);
inline constexpr double kMoment4 = 11.0 / 24.0;

}  // namespace oracle
