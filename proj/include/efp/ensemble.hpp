#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace efp {

class RngStream;

/// m particles in R^d, stored as a flat row-major m*d buffer.
///
/// Every live Ensemble contributes its particle count to a process-wide
/// counter (with a high-water mark), which is how the memory behaviour of
/// the running-average optimizer vs. the naive mixture path is asserted.
/// Moves transfer the count; only copies and fresh allocations grow it.
class Ensemble {
 public:
  Ensemble() = default;
  Ensemble(std::size_t count, std::size_t dim);
  Ensemble(const Ensemble& other);
  Ensemble(Ensemble&& other) noexcept;
  Ensemble& operator=(const Ensemble& other);
  Ensemble& operator=(Ensemble&& other) noexcept;
  ~Ensemble();

  /// count x dim particles drawn i.i.d. from N(0, scale^2 I), one RNG stream
  /// per particle keyed by (seed, particle index, stream_key).
  static Ensemble gaussian(std::size_t count, std::size_t dim, double scale,
                           std::uint64_t seed, std::uint64_t stream_key = 0);

  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return data_.empty(); }

  std::span<double> particle(std::size_t r) {
    return {data_.data() + r * dim_, dim_};
  }
  std::span<const double> particle(std::size_t r) const {
    return {data_.data() + r * dim_, dim_};
  }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool all_finite() const;

  // Process-wide particle accounting.
  static long long live_particles();
  static long long peak_particles();
  static void reset_peak();

 private:
  void account(long long delta);

  std::size_t dim_ = 0;
  std::vector<double> data_;
};

}  // namespace efp
