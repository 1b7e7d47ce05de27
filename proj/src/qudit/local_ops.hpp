#pragma once

// Per-local-vector bodies shared by the serial and omp kernels, so the two
// produce bit-identical amplitudes.

#include <cstddef>
#include <span>

#include "smqs/kernels.hpp"

namespace smqs::kernels::detail {

// Walks local vectors [begin, end) without a division per vector.
template <typename F>
void for_each_base(const TargetLayout& layout, std::size_t begin, std::size_t end, F&& f) {
  if (begin >= end) return;
  const std::size_t block = layout.stride * static_cast<std::size_t>(layout.d);
  std::size_t o = begin / layout.stride;
  std::size_t i = begin % layout.stride;
  for (std::size_t v = begin; v < end; ++v) {
    f(o * block + i);
    if (++i == layout.stride) {
      i = 0;
      ++o;
    }
  }
}

// Plain product without the inf/nan recovery of operator*.
inline void mul_add(Amplitude& acc, const Amplitude& a, const Amplitude& b) {
  acc = {acc.real() + (a.real() * b.real() - a.imag() * b.imag()),
         acc.imag() + (a.real() * b.imag() + a.imag() * b.real())};
}

// Terms with a zero input are exact zeros, so leaving them out of the sum
// changes no bits.
inline void apply_one(Amplitude* amps, std::size_t base, std::size_t stride, std::size_t d,
                      const Amplitude* matrix, Amplitude* in, std::size_t* nz) {
  std::size_t count = 0;
  for (std::size_t r = 0; r < d; ++r) {
    in[r] = amps[base + r * stride];
    if (in[r] != Amplitude{}) nz[count++] = r;
  }
  if (count == 0) return;
  for (std::size_t l = 0; l < d; ++l) {
    Amplitude acc{0.0, 0.0};
    const Amplitude* row = matrix + l * d;
    for (std::size_t j = 0; j < count; ++j) mul_add(acc, row[nz[j]], in[nz[j]]);
    amps[base + l * stride] = acc;
  }
}

inline void shift_one(Amplitude* amps, std::size_t base, std::size_t stride, std::size_t d,
                      std::size_t s, Amplitude* in) {
  bool nonzero = false;
  for (std::size_t l = 0; l < d; ++l) {
    in[l] = amps[base + l * stride];
    nonzero = nonzero || in[l] != Amplitude{};
  }
  if (!nonzero) return;
  std::size_t to = s;
  for (std::size_t l = 0; l < d; ++l) {
    amps[base + to * stride] = in[l];
    if (++to == d) to = 0;
  }
}

inline void weights_one(const Amplitude* amps, std::size_t base, std::size_t stride,
                        std::size_t d, double* acc) {
  for (std::size_t l = 0; l < d; ++l) {
    const Amplitude& a = amps[base + l * stride];
    acc[l] += a.real() * a.real() + a.imag() * a.imag();
  }
}

inline void project_one(Amplitude* amps, std::size_t base, std::size_t stride, std::size_t d,
                        std::size_t digit, double scale) {
  for (std::size_t l = 0; l < d; ++l) {
    auto& a = amps[base + l * stride];
    a = (l == digit) ? Amplitude{a.real() * scale, a.imag() * scale} : Amplitude{0.0, 0.0};
  }
}

}  // namespace smqs::kernels::detail
