#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <numbers>

#include "smqs/kernels.hpp"
#include "smqs/qudit.hpp"

namespace smqs::qudit {

namespace kern = smqs::kernels;

DimensionCapExceeded::DimensionCapExceeded(int d, int k, std::size_t cap)
    : std::length_error("register dimension " + std::to_string(d) + "^" + std::to_string(k) +
                        " exceeds cap of " + std::to_string(cap) + " entries"),
      d_(d),
      k_(k) {}

std::string to_string(Basis basis) { return basis == Basis::V1 ? "V1" : "V2"; }

Basis basis_from_string(const std::string& text) {
  if (text == "V1") return Basis::V1;
  if (text == "V2") return Basis::V2;
  throw std::invalid_argument("unknown basis: " + text);
}

std::size_t checked_dimension(int d, int k, std::size_t max_entries) {
  if (d < 2) throw std::invalid_argument("qudit level must be >= 2");
  if (k < 1) throw std::invalid_argument("register needs at least one qudit");
  std::size_t dim = 1;
  for (int q = 0; q < k; ++q) {
    if (dim > max_entries / static_cast<std::size_t>(d)) throw DimensionCapExceeded(d, k, max_entries);
    dim *= static_cast<std::size_t>(d);
  }
  return dim;
}

std::vector<Amplitude> fourier_matrix(int d, bool inverse) {
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  const double sign = inverse ? -1.0 : 1.0;
  std::vector<Amplitude> m(static_cast<std::size_t>(d) * d);
  for (int l = 0; l < d; ++l) {
    for (int r = 0; r < d; ++r) {
      // Reduce l*r mod d first so the phase argument stays in [0, 2 pi).
      const double angle = sign * 2.0 * std::numbers::pi * ((l * r) % d) / d;
      m[static_cast<std::size_t>(l) * d + r] = std::polar(norm, angle);
    }
  }
  return m;
}

Register Register::basis_state(int d, std::span<const int> digits, std::size_t max_entries) {
  if (digits.empty()) throw std::invalid_argument("basis_state: empty digit sequence");
  const int k = static_cast<int>(digits.size());
  const std::size_t dim = checked_dimension(d, k, max_entries);
  std::size_t index = 0;
  for (int digit : digits) {
    if (digit < 0 || digit >= d)
      throw std::out_of_range("basis_state: digit " + std::to_string(digit) + " not in [0, " +
                              std::to_string(d) + ")");
    index = index * static_cast<std::size_t>(d) + static_cast<std::size_t>(digit);
  }
  std::vector<Amplitude> amps(dim);
  amps[index] = 1.0;
  return Register(d, k, std::move(amps), std::vector<int>(digits.begin(), digits.end()));
}

Register Register::omega_state(int d, int n, std::size_t max_entries) {
  if (n < 2) throw std::invalid_argument("omega_state: needs at least two qudits");
  const std::size_t dim = checked_dimension(d, n, max_entries);
  // Index of |1 1 ... 1>; |r r ... r> sits at r times that.
  std::size_t diagonal = 0;
  for (int q = 0; q < n; ++q) diagonal = diagonal * static_cast<std::size_t>(d) + 1;
  std::vector<Amplitude> amps(dim);
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (int r = 0; r < d; ++r) amps[static_cast<std::size_t>(r) * diagonal] = a;
  return Register(d, n, std::move(amps));
}

Register Register::from_amplitudes(int d, int k, std::vector<Amplitude> amplitudes,
                                   std::size_t max_entries) {
  const std::size_t dim = checked_dimension(d, k, max_entries);
  if (amplitudes.size() != dim)
    throw std::invalid_argument("from_amplitudes: expected " + std::to_string(dim) + " amplitudes, got " +
                                std::to_string(amplitudes.size()));
  const double n2 = kern::omp::norm_squared(amplitudes);
  if (std::abs(n2 - 1.0) > kNormTolerance)
    throw std::invalid_argument("from_amplitudes: state is not normalized");
  return Register(d, k, std::move(amplitudes));
}

Register Register::product(std::span<const Register> factors, std::size_t max_entries) {
  if (factors.empty()) throw std::invalid_argument("product: no factors");
  const int d = factors.front().level();
  int k = 0;
  for (const auto& f : factors) {
    if (f.level() != d) throw std::invalid_argument("product: factors have different levels");
    k += f.qudit_count();
  }
  checked_dimension(d, k, max_entries);
  std::vector<Amplitude> amps{Amplitude{1.0, 0.0}};
  std::vector<int> pinned;
  for (const auto& f : factors) {
    pinned.insert(pinned.end(), f.pinned_.begin(), f.pinned_.end());
    std::vector<Amplitude> next(amps.size() * f.size());
    for (std::size_t i = 0; i < amps.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) next[i * f.size() + j] = amps[i] * f.amplitudes_[j];
    amps = std::move(next);
  }
  return Register(d, k, std::move(amps), std::move(pinned));
}

Amplitude Register::amplitude_of(std::span<const int> digits) const {
  if (static_cast<int>(digits.size()) != k_) throw std::invalid_argument("amplitude_of: wrong digit count");
  std::size_t index = 0;
  for (int digit : digits) {
    if (digit < 0 || digit >= d_) throw std::out_of_range("amplitude_of: digit out of range");
    index = index * static_cast<std::size_t>(d_) + static_cast<std::size_t>(digit);
  }
  return amplitudes_[index];
}

double Register::norm_squared() const { return kern::omp::norm_squared(amplitudes_); }

void Register::check_target(int target) const {
  if (target < 0 || target >= k_)
    throw std::out_of_range("target qudit " + std::to_string(target) + " out of range for " +
                            std::to_string(k_) + "-qudit register");
}

namespace {

// fourier_matrix per (d, direction), built once per thread.
const std::vector<Amplitude>& cached_fourier(int d, bool inverse) {
  thread_local std::map<std::pair<int, bool>, std::vector<Amplitude>> cache;
  auto [it, fresh] = cache.try_emplace({d, inverse});
  if (fresh) it->second = fourier_matrix(d, inverse);
  return it->second;
}

}  // namespace

std::vector<std::size_t> Register::active_indices(int target) const {
  std::vector<std::size_t> weight(static_cast<std::size_t>(k_));
  std::size_t w = 1;
  for (int q = k_ - 1; q >= 0; --q) {
    weight[static_cast<std::size_t>(q)] = w;
    w *= static_cast<std::size_t>(d_);
  }
  std::size_t offset = 0;
  std::vector<std::size_t> indices{0};
  for (int q = 0; q < k_; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    if (q != target && pinned_[uq] >= 0) {
      offset += static_cast<std::size_t>(pinned_[uq]) * weight[uq];
      continue;
    }
    // Free qudit: expand, keeping ascending order.
    std::vector<std::size_t> next;
    next.reserve(indices.size() * static_cast<std::size_t>(d_));
    for (std::size_t base : indices)
      for (int digit = 0; digit < d_; ++digit) next.push_back(base + static_cast<std::size_t>(digit) * weight[uq]);
    indices = std::move(next);
  }
  for (auto& index : indices) index += offset;
  return indices;
}

// Runs kernel(span, layout) on the slice picked out by the pinned qudits, or
// on the whole vector when nothing else is pinned.
template <typename Kernel>
void Register::on_active(int target, Kernel&& kernel) {
  int free_before = 0;
  int free_count = 0;
  for (int q = 0; q < k_; ++q) {
    if (q != target && pinned_[static_cast<std::size_t>(q)] >= 0) continue;
    if (q < target) ++free_before;
    ++free_count;
  }
  if (free_count == k_) {
    kernel(std::span<Amplitude>(amplitudes_), kern::layout_for(d_, k_, target));
    return;
  }
  const auto indices = active_indices(target);
  std::vector<Amplitude> slice(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) slice[i] = amplitudes_[indices[i]];
  kernel(std::span<Amplitude>(slice), kern::layout_for(d_, free_count, free_before));
  for (std::size_t i = 0; i < indices.size(); ++i) amplitudes_[indices[i]] = slice[i];
}

void Register::qft_inplace(int target) {
  check_target(target);
  const auto& matrix = cached_fourier(d_, false);
  on_active(target, [&](std::span<Amplitude> amps, const kern::TargetLayout& layout) {
    kern::omp::apply_local(amps, layout, matrix);
  });
  pinned_[static_cast<std::size_t>(target)] = -1;
}

void Register::iqft_inplace(int target) {
  check_target(target);
  const auto& matrix = cached_fourier(d_, true);
  on_active(target, [&](std::span<Amplitude> amps, const kern::TargetLayout& layout) {
    kern::omp::apply_local(amps, layout, matrix);
  });
  pinned_[static_cast<std::size_t>(target)] = -1;
}

void Register::shift_inplace(int target, int s) {
  check_target(target);
  if (s < 0 || s >= d_)
    throw std::out_of_range("shift " + std::to_string(s) + " not in [0, " + std::to_string(d_) + ")");
  if (s == 0) return;
  on_active(target, [&](std::span<Amplitude> amps, const kern::TargetLayout& layout) {
    kern::omp::cyclic_shift(amps, layout, s);
  });
  auto& pin = pinned_[static_cast<std::size_t>(target)];
  if (pin >= 0) pin = (pin + s) % d_;
}

std::vector<double> Register::digit_probabilities(int target) const {
  check_target(target);
  std::vector<double> weights(static_cast<std::size_t>(d_));
  const bool any_pinned = std::ranges::any_of(pinned_, [](int p) { return p >= 0; });
  if (!any_pinned) {
    kern::omp::digit_weights(amplitudes_, kern::layout_for(d_, k_, target), weights);
    return weights;
  }
  const auto indices = active_indices(target);
  std::vector<Amplitude> slice(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) slice[i] = amplitudes_[indices[i]];
  int free_before = 0;
  int free_count = 0;
  for (int q = 0; q < k_; ++q) {
    if (q != target && pinned_[static_cast<std::size_t>(q)] >= 0) continue;
    if (q < target) ++free_before;
    ++free_count;
  }
  kern::omp::digit_weights(slice, kern::layout_for(d_, free_count, free_before), weights);
  return weights;
}

void Register::collapse_inplace(int target, int value) {
  collapse_inplace(target, value, digit_probabilities(target));
}

void Register::collapse_inplace(int target, int value, std::span<const double> weights) {
  check_target(target);
  if (weights.size() != static_cast<std::size_t>(d_))
    throw std::invalid_argument("weights must have one entry per level");
  if (value < 0 || value >= d_) throw std::out_of_range("collapse: digit out of range");
  const double p = weights[static_cast<std::size_t>(value)];
  if (!(p > 0.0)) throw std::logic_error("collapse onto a zero-probability outcome");
  // p is the squared norm of the kept slice, so this rescale is the renormalization.
  on_active(target, [&](std::span<Amplitude> amps, const kern::TargetLayout& layout) {
    kern::omp::project(amps, layout, value, 1.0 / std::sqrt(p));
  });
  pinned_[static_cast<std::size_t>(target)] = value;
}

Register apply_qft(Register reg, int target) {
  reg.qft_inplace(target);
  return reg;
}

Register apply_iqft(Register reg, int target) {
  reg.iqft_inplace(target);
  return reg;
}

Register apply_shift(Register reg, int target, int s) {
  reg.shift_inplace(target, s);
  return reg;
}

namespace {

int sample_index(std::span<const double> weights, RandomStream& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = rng.uniform_unit() * total;
  double cumulative = 0.0;
  int last_nonzero = -1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_nonzero = static_cast<int>(i);
    cumulative += weights[i];
    if (u < cumulative) return last_nonzero;
  }
  // Rounding left u past the final boundary.
  return last_nonzero;
}

}  // namespace

MeasurementOutcome measure(Register reg, int target, Basis basis, RandomStream& rng) {
  if (basis == Basis::V2) reg.iqft_inplace(target);
  const auto weights = reg.digit_probabilities(target);
  const int value = sample_index(weights, rng);
  reg.collapse_inplace(target, value, weights);
  if (basis == Basis::V2) reg.qft_inplace(target);
  return {value, std::move(reg)};
}

std::vector<double> outcome_distribution(const Register& reg, int target, Basis basis) {
  if (basis == Basis::V1) return reg.digit_probabilities(target);
  return apply_iqft(reg, target).digit_probabilities(target);
}

bool approx_equal(const Register& a, const Register& b, double tol) {
  if (a.level() != b.level() || a.qudit_count() != b.qudit_count())
    throw std::invalid_argument("approx_equal: register shapes differ");
  Amplitude overlap{0.0, 0.0};
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) overlap += std::conj(x[i]) * y[i];
  return std::abs(overlap) >= 1.0 - tol;
}

}  // namespace smqs::qudit
