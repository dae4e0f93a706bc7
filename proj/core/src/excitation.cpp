#include "kidsim/excitation.hpp"

namespace kidsim {

// Firmware interpolation filter is undisclosed; this stand-in keeps the tone
// band (<=50 MHz) flat and pushes the x8 images (first at 200 MHz) below
// -80 dB. Gain 8 compensates the zero-stuffing loss.
std::vector<double> default_interp_taps() {
    return design_lowpass({kDacRate, 50e6, 200e6, 85.0, static_cast<double>(kInterpFactor)});
}

}  // namespace kidsim
