#pragma once

namespace mdirac {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

} // namespace mdirac
