#include <algorithm>
#include <cstdint>
#include <vector>

#include "smqs/kernels.hpp"
#include "local_ops.hpp"

namespace smqs::kernels::omp {

namespace {

// Reduction chunk, in local vectors (or entries for norm_squared). Fixed so
// that summation order never depends on the thread count.
constexpr std::size_t kChunk = 2048;

bool parallel_worthwhile(std::size_t entries) { return entries >= kParallelThreshold; }

// Every kernel splits work into these chunks and walks bases incrementally.
std::size_t chunk_count(std::size_t vectors) { return (vectors + kChunk - 1) / kChunk; }

}  // namespace

void apply_local(std::span<Amplitude> amps, const TargetLayout& layout,
                 std::span<const Amplitude> matrix) {
  const auto d = static_cast<std::size_t>(layout.d);
  const std::size_t vectors = layout.local_vectors();
  const auto chunks = static_cast<std::int64_t>(chunk_count(vectors));
#pragma omp parallel if (parallel_worthwhile(amps.size()))
  {
    std::vector<Amplitude> in(d);
    std::vector<std::size_t> nz(d);
#pragma omp for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
      const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
      detail::for_each_base(layout, begin, std::min(vectors, begin + kChunk), [&](std::size_t base) {
        detail::apply_one(amps.data(), base, layout.stride, d, matrix.data(), in.data(), nz.data());
      });
    }
  }
}

void cyclic_shift(std::span<Amplitude> amps, const TargetLayout& layout, int s) {
  const auto d = static_cast<std::size_t>(layout.d);
  const std::size_t vectors = layout.local_vectors();
  const auto chunks = static_cast<std::int64_t>(chunk_count(vectors));
#pragma omp parallel if (parallel_worthwhile(amps.size()))
  {
    std::vector<Amplitude> in(d);
#pragma omp for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
      const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
      detail::for_each_base(layout, begin, std::min(vectors, begin + kChunk), [&](std::size_t base) {
        detail::shift_one(amps.data(), base, layout.stride, d, static_cast<std::size_t>(s), in.data());
      });
    }
  }
}

void digit_weights(std::span<const Amplitude> amps, const TargetLayout& layout,
                   std::span<double> out) {
  const auto d = static_cast<std::size_t>(layout.d);
  const std::size_t vectors = layout.local_vectors();
  const std::size_t chunks = chunk_count(vectors);
  std::vector<double> partial(chunks * d, 0.0);
#pragma omp parallel for schedule(static) if (parallel_worthwhile(amps.size()))
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    double* acc = partial.data() + static_cast<std::size_t>(c) * d;
    detail::for_each_base(layout, begin, std::min(vectors, begin + kChunk), [&](std::size_t base) {
      detail::weights_one(amps.data(), base, layout.stride, d, acc);
    });
  }
  for (std::size_t l = 0; l < d; ++l) out[l] = 0.0;
  for (std::size_t c = 0; c < chunks; ++c)
    for (std::size_t l = 0; l < d; ++l) out[l] += partial[c * d + l];
}

void project(std::span<Amplitude> amps, const TargetLayout& layout, int digit, double scale) {
  const auto d = static_cast<std::size_t>(layout.d);
  const std::size_t vectors = layout.local_vectors();
  const auto chunks = static_cast<std::int64_t>(chunk_count(vectors));
#pragma omp parallel for schedule(static) if (parallel_worthwhile(amps.size()))
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    detail::for_each_base(layout, begin, std::min(vectors, begin + kChunk), [&](std::size_t base) {
      detail::project_one(amps.data(), base, layout.stride, d, static_cast<std::size_t>(digit), scale);
    });
  }
}

double norm_squared(std::span<const Amplitude> amps) {
  const std::size_t chunks = (amps.size() + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static) if (parallel_worthwhile(amps.size()))
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(amps.size(), begin + kChunk);
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += std::norm(amps[i]);
    partial[static_cast<std::size_t>(c)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void scale(std::span<Amplitude> amps, double factor) {
  const auto count = static_cast<std::int64_t>(amps.size());
#pragma omp parallel for schedule(static) if (parallel_worthwhile(amps.size()))
  for (std::int64_t i = 0; i < count; ++i) amps[static_cast<std::size_t>(i)] *= factor;
}

}  // namespace smqs::kernels::omp
