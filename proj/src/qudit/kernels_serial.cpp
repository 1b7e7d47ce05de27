#include <stdexcept>
#include <vector>

#include "smqs/kernels.hpp"
#include "local_ops.hpp"

namespace smqs::kernels {

TargetLayout layout_for(int d, int k, int target) {
  if (d < 2 || k < 1) throw std::invalid_argument("layout_for: bad register shape");
  if (target < 0 || target >= k) throw std::out_of_range("layout_for: target qudit out of range");
  TargetLayout layout;
  layout.d = d;
  for (int q = 0; q < target; ++q) layout.outer *= static_cast<std::size_t>(d);
  for (int q = target + 1; q < k; ++q) layout.stride *= static_cast<std::size_t>(d);
  return layout;
}

namespace serial {

void apply_local(std::span<Amplitude> amps, const TargetLayout& layout,
                 std::span<const Amplitude> matrix) {
  const auto d = static_cast<std::size_t>(layout.d);
  std::vector<Amplitude> in(d);
  std::vector<std::size_t> nz(d);
  detail::for_each_base(layout, 0, layout.local_vectors(), [&](std::size_t base) {
    detail::apply_one(amps.data(), base, layout.stride, d, matrix.data(), in.data(), nz.data());
  });
}

void cyclic_shift(std::span<Amplitude> amps, const TargetLayout& layout, int s) {
  const auto d = static_cast<std::size_t>(layout.d);
  std::vector<Amplitude> in(d);
  detail::for_each_base(layout, 0, layout.local_vectors(), [&](std::size_t base) {
    detail::shift_one(amps.data(), base, layout.stride, d, static_cast<std::size_t>(s), in.data());
  });
}

void digit_weights(std::span<const Amplitude> amps, const TargetLayout& layout,
                   std::span<double> out) {
  const auto d = static_cast<std::size_t>(layout.d);
  for (std::size_t l = 0; l < d; ++l) out[l] = 0.0;
  detail::for_each_base(layout, 0, layout.local_vectors(), [&](std::size_t base) {
    detail::weights_one(amps.data(), base, layout.stride, d, out.data());
  });
}

void project(std::span<Amplitude> amps, const TargetLayout& layout, int digit, double scale) {
  const auto d = static_cast<std::size_t>(layout.d);
  detail::for_each_base(layout, 0, layout.local_vectors(), [&](std::size_t base) {
    detail::project_one(amps.data(), base, layout.stride, d, static_cast<std::size_t>(digit), scale);
  });
}

double norm_squared(std::span<const Amplitude> amps) {
  double total = 0.0;
  for (const auto& a : amps) total += std::norm(a);
  return total;
}

void scale(std::span<Amplitude> amps, double factor) {
  for (auto& a : amps) a *= factor;
}

}  // namespace serial
}  // namespace smqs::kernels
