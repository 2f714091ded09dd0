#pragma once

// Reference values computed once with mpmath (30 digits) from definitions
// independent of the library code, then frozen here.

namespace oracle {

// Brownian motion on (-1, 1) started at 0, generator (1/2) d^2/dx^2
inline constexpr double kExitBy[][2] = {
    {0.05, 0.0000154884328620881673},
    {0.1, 0.00313080451600509935},
    {0.25, 0.0910005},
    {0.5, 0.3145542},
    {1.0, 0.6292226},
    {2.0, 0.892022955555890987},
};
inline constexpr double kCappedMeanAt1 = 0.6994545;        // E[tau ^ 1]
inline constexpr double kCappedMeanAtHalf = 0.443211836556816074;
inline constexpr double kMeanExit = 1.0;                   // E[tau] = 1 - x^2
inline constexpr double kLaplaceAt1 = 0.459098131085425499;  // 1 / cosh(sqrt 2)

// Dirichlet heat kernel of (-1, 1), image sum
inline constexpr double kDirichlet_01_0_0 = 1.26156625580951629;
inline constexpr double kDirichlet_03_02_m05 = 0.315863224112733648;
inline constexpr double kDirichletCell_01_first = 1.26155823503184486;  // average over [0, 2/1024)
inline constexpr double kPartProb_01 = 0.248170364110884375;         // P^U_0.1(0, (-0.1, 0.1))

// free motion
inline constexpr double kGaussAbsLt1 = 0.6826895;
// P_x[X_t in [-1/2, 1/2]], rows x = 0 and x = 2, columns t = 0.1, 0.5, 1
inline constexpr double kGaussHalf[2][3] = {{0.8861537, 0.5204999, 0.3829249}, {1.0507e-6, 0.0167440, 0.0605975}};

// Phi for Psi(r) = r^beta
inline constexpr double kPhiBeta3_R1_t1 = 0.3849002;
inline constexpr double kPhiBeta25_R2_t07 = 1.31172423961535253;

inline constexpr double kInvLog8 = 0.4808983;
inline constexpr double k32OverE3 = 1.593186188;

}  // namespace oracle
