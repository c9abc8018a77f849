#pragma once

#include <cstdint>
#include <vector>

#include "eai/config.hpp"
#include "eai/grad_check.hpp"
#include "eai/motion.hpp"

namespace eai {

// Small configuration for end-to-end gradient checks: H = H_c = H_d = 8,
// T = dT = 6, batch of 2, no dropout.
RunConfig toy_gradcheck_config();

// Two windows whose observations are synthetic motion in metres plus 5 cm
// Gaussian jitter, so every DCT coefficient carries energy. Targets sit
// about 1 cm from the untrained model's own forecast: distance losses keep
// unit-size gradients while the loss value, and with it the rounding noise
// of central differences, stays small.
std::vector<Window> toy_gradcheck_windows(const RunConfig& config, std::uint64_t seed = 3);

// Builds the model described by `config` and checks the gradient of the
// full training loss over `windows` against central differences.
GradCheckReport check_training_gradients(const RunConfig& config, const std::vector<Window>& windows,
                                         const GradCheckOptions& options);

}  // namespace eai
