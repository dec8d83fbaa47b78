#pragma once

#include <cstddef>
#include <span>

#include "jcr/types.hpp"

namespace jcr::fft {

// Unnormalized in-place transforms on contiguous data.
//   forward:  X[k] = sum_n x[n] exp(-j 2 pi k n / len)
//   inverse:  x[n] = sum_k X[k] exp(+j 2 pi k n / len)
// Plans are cached per length and shared across threads.
void forward(std::span<Complex> data);
void inverse(std::span<Complex> data);

}  // namespace jcr::fft
