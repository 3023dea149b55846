#pragma once

#include <cstdint>
#include <span>

namespace locfuse {

// IEEE 754 binary16 conversion. float -> half rounds to nearest, ties to
// even; half -> float is exact.
std::uint16_t float_to_half(float value);
float half_to_float(std::uint16_t bits);

// Value of one unit in the last place of the half grid at |value|.
float half_ulp(float value);

void float_to_half(std::span<const float> in, std::span<std::uint16_t> out);
void half_to_float(std::span<const std::uint16_t> in, std::span<float> out);

}  // namespace locfuse
