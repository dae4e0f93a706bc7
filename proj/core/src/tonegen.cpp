#include "kidsim/tonegen.hpp"

namespace kidsim {

FxStream generate_tone(const ToneConfig& cfg, std::size_t n_samples, SaturationCounter& sat,
                       int cordic_iterations) {
    if (n_samples < 1) throw std::invalid_argument("generate_tone: n_samples < 1");
    ToneGenerator<CpxI32> gen(cfg, cordic_iterations, sat);
    return gen.block(n_samples);
}

FloatStream generate_tone_f(const ToneConfig& cfg, std::size_t n_samples, int cordic_iterations) {
    if (n_samples < 1) throw std::invalid_argument("generate_tone: n_samples < 1");
    SaturationCounter sink;
    ToneGenerator<CpxF64> gen(cfg, cordic_iterations, sink);
    return gen.block(n_samples);
}

}  // namespace kidsim
