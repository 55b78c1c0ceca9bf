#pragma once

// Reference numbers produced by tools/golden.py (scipy, independent of this
// library) and frozen here. Thresholds carry a 10% margin over the value the
// script measured for the same formula, unless fixed by the acceptance
// criteria themselves.

namespace trg::golden {

// sup |asymptotic - reference| or sup relative error, as measured
inline constexpr double mathieu_sup = 1.0607;             // eps=0.05, a1=0, R0=1, t in [0, 20]
inline constexpr double three_wave_nonres_sup = 4.682e-3;   // eps=0.05, unit amplitudes, t in [0, 20]
inline constexpr double lin_example2_sup = 3.798e-5;        // eps=0.1, K=2, t in [0, 20]
inline constexpr double lighthill_rel = 0.8815;             // eps=0.05, A=1, x in [0.05, 1]
inline constexpr double tsien_rel = 0.9949;
inline constexpr double lighthill_at_1e3 = 0.029993;
inline constexpr double tsien_at_1e3 = 2.0040e-5;

inline constexpr double margin = 1.1;

// measured frequencies (2 pi / mean crossing period)
inline constexpr double three_wave_sum_freq = 2.0017708;   // (2,1,1), eps=0.01
inline constexpr double three_wave_diff_freq = 1.0018129;  // (1,2,1), eps=0.01
inline constexpr double rod_freq = 1.4008749;              // N=2, mu=1, eps=0.05, A=(1, 0.5)
inline constexpr double beam_freq = 0.6800197;             // N=2, alpha=0.5

inline constexpr double duffing_orbit_amplitude = 0.4398509;  // alpha=1, beta=0.1, F=0.2, w=1.2
inline constexpr double cubic_route2_period = 8.99746;        // eta=0.5, A=0.1
inline constexpr double blasius_ypp0 = 0.16602867;

}  // namespace trg::golden
