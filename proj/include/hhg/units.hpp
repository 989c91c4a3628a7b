#pragma once

namespace hhg::units {

inline constexpr double kHartreeEv = 27.211386;
/// Intensity (W/cm^2) of a field with peak amplitude 1 a.u.
inline constexpr double kAtomicIntensityWcm2 = 3.50945e16;

}  // namespace hhg::units
