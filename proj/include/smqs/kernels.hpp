#pragma once

// Dense amplitude kernels acting on one target qudit of a register.
//
// A register of k qudits with level d stores d^k amplitudes; qudit 0 is the
// most significant base-d digit. For a target qudit t the vector splits into
// `outer` = d^t blocks of d * `stride` entries, `stride` = d^(k-1-t). Inside a
// block, the entries sharing an inner offset i form one local d-vector
// (offsets i, i + stride, ..., i + (d-1) * stride), and every single-qudit
// operation acts on each local d-vector independently.
//
// Two implementations share this interface: `serial` is the plain reference
// used by tests and benchmarks, `omp` is the one the simulator calls.
// apply_local and cyclic_shift skip all-zero local vectors. Both versions
// share the per-vector arithmetic, so they agree bit for bit. The
// omp reductions use a fixed chunking that does not depend on the thread
// count, so results are reproducible across machines.

#include <complex>
#include <cstddef>
#include <span>

namespace smqs::kernels {

using Amplitude = std::complex<double>;

struct TargetLayout {
  std::size_t outer = 1;
  std::size_t stride = 1;
  int d = 2;

  std::size_t local_vectors() const { return outer * stride; }
  /// Index of digit 0 of local vector `v`.
  std::size_t base(std::size_t v) const {
    return (v / stride) * stride * static_cast<std::size_t>(d) + v % stride;
  }
};

TargetLayout layout_for(int d, int k, int target);

namespace serial {

/// Multiplies every local d-vector by `matrix` (row-major d x d).
void apply_local(std::span<Amplitude> amps, const TargetLayout& layout,
                 std::span<const Amplitude> matrix);
/// Moves the amplitude at digit l to digit (l + s) mod d.
void cyclic_shift(std::span<Amplitude> amps, const TargetLayout& layout, int s);
/// out[l] = sum of |a|^2 over entries whose target digit is l.
void digit_weights(std::span<const Amplitude> amps, const TargetLayout& layout,
                   std::span<double> out);
/// Zeroes every entry whose target digit differs from `digit`; scales the rest.
void project(std::span<Amplitude> amps, const TargetLayout& layout, int digit, double scale);
double norm_squared(std::span<const Amplitude> amps);
void scale(std::span<Amplitude> amps, double factor);

}  // namespace serial

namespace omp {

void apply_local(std::span<Amplitude> amps, const TargetLayout& layout,
                 std::span<const Amplitude> matrix);
void cyclic_shift(std::span<Amplitude> amps, const TargetLayout& layout, int s);
void digit_weights(std::span<const Amplitude> amps, const TargetLayout& layout,
                   std::span<double> out);
void project(std::span<Amplitude> amps, const TargetLayout& layout, int digit, double scale);
double norm_squared(std::span<const Amplitude> amps);
void scale(std::span<Amplitude> amps, double factor);

/// Registers smaller than this stay on one thread.
inline constexpr std::size_t kParallelThreshold = 1 << 14;

}  // namespace omp

}  // namespace smqs::kernels
