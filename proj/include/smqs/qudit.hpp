#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "smqs/random.hpp"

namespace smqs::qudit {

using Amplitude = std::complex<double>;

/// Default upper bound on d^k for any register.
inline constexpr std::size_t kDefaultMaxEntries = std::size_t{1} << 22;

/// Squared-norm tolerance for a valid register.
inline constexpr double kNormTolerance = 1e-9;

/// Thrown when d^k would exceed the configured cap.
class DimensionCapExceeded : public std::length_error {
 public:
  DimensionCapExceeded(int d, int k, std::size_t cap);
  int level() const { return d_; }
  int qudits() const { return k_; }

 private:
  int d_;
  int k_;
};

/// V1 is the computational basis {|r>}, V2 its Fourier image {QFT|r>}.
enum class Basis { V1, V2 };

std::string to_string(Basis basis);
Basis basis_from_string(const std::string& text);

/// Dense state of k qudits of level d. Qudit 0 is the most significant
/// base-d digit of the amplitude index.
class Register {
 public:
  static Register basis_state(int d, std::span<const int> digits,
                              std::size_t max_entries = kDefaultMaxEntries);
  static Register basis_state(int d, std::initializer_list<int> digits,
                              std::size_t max_entries = kDefaultMaxEntries) {
    return basis_state(d, std::span<const int>(digits.begin(), digits.size()), max_entries);
  }
  /// (1/sqrt(d)) sum_r |r>^{(x)n}
  static Register omega_state(int d, int n, std::size_t max_entries = kDefaultMaxEntries);
  /// Takes ownership of `amplitudes`; rejects wrong length or a norm off by more than 1e-9.
  static Register from_amplitudes(int d, int k, std::vector<Amplitude> amplitudes,
                                  std::size_t max_entries = kDefaultMaxEntries);
  /// Tensor product; factors[0] supplies the most significant qudits.
  static Register product(std::span<const Register> factors,
                          std::size_t max_entries = kDefaultMaxEntries);

  int level() const { return d_; }
  int qudit_count() const { return k_; }
  std::size_t size() const { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  Amplitude amplitude(std::size_t index) const { return amplitudes_.at(index); }
  /// Amplitude of the basis tuple `digits`.
  Amplitude amplitude_of(std::span<const int> digits) const;
  double norm_squared() const;

  // Mutating forms used by the free functions below.
  void qft_inplace(int target);
  void iqft_inplace(int target);
  void shift_inplace(int target, int s);
  /// Collapses `target` onto computational digit `value` and renormalizes.
  void collapse_inplace(int target, int value);
  // Same, reusing weights already computed by digit_probabilities(target).
  void collapse_inplace(int target, int value, std::span<const double> weights);
  std::vector<double> digit_probabilities(int target) const;

 private:
  Register(int d, int k, std::vector<Amplitude> amplitudes, std::vector<int> pinned = {})
      : d_(d), k_(k), amplitudes_(std::move(amplitudes)), pinned_(std::move(pinned)) {
    if (pinned_.empty()) pinned_.assign(static_cast<std::size_t>(k_), -1);
  }

  void check_target(int target) const;
  // Entry indices where every pinned qudit other than `target` holds its digit.
  std::vector<std::size_t> active_indices(int target) const;
  template <typename Kernel>
  void on_active(int target, Kernel&& kernel);

  int d_;
  int k_;
  std::vector<Amplitude> amplitudes_;
  // pinned_[q] >= 0 means every amplitude whose digit q differs is exactly zero.
  // Operations on other qudits then only touch that slice.
  std::vector<int> pinned_;
};

/// d^k, or DimensionCapExceeded when it exceeds `max_entries`.
std::size_t checked_dimension(int d, int k, std::size_t max_entries = kDefaultMaxEntries);

/// Row-major d x d matrix with entries e^{+-2 pi i l r / d} / sqrt(d).
std::vector<Amplitude> fourier_matrix(int d, bool inverse);

Register apply_qft(Register reg, int target);
Register apply_iqft(Register reg, int target);
Register apply_shift(Register reg, int target, int s);

struct MeasurementOutcome {
  int value;
  Register posterior;
};

/// Projective measurement of `target`. V2 runs IQFT, a computational
/// measurement and QFT, so the posterior factor is QFT|value>.
MeasurementOutcome measure(Register reg, int target, Basis basis, RandomStream& rng);

/// Exact outcome probabilities of `measure` on `target`.
std::vector<double> outcome_distribution(const Register& reg, int target, Basis basis);

/// |<a|b>| >= 1 - tol, insensitive to global phase.
bool approx_equal(const Register& a, const Register& b, double tol);

}  // namespace smqs::qudit
