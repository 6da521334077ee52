#include "efp/ensemble.hpp"

#include <atomic>
#include <cmath>

#include "efp/rng.hpp"

namespace efp {

namespace {
std::atomic<long long> g_live{0};
std::atomic<long long> g_peak{0};

void bump_peak(long long live) {
  long long peak = g_peak.load(std::memory_order_relaxed);
  while (live > peak &&
         !g_peak.compare_exchange_weak(peak, live, std::memory_order_relaxed)) {
  }
}
}  // namespace

void Ensemble::account(long long delta) {
  if (delta == 0) return;
  const long long live = g_live.fetch_add(delta, std::memory_order_relaxed) + delta;
  if (delta > 0) bump_peak(live);
}

Ensemble::Ensemble(std::size_t count, std::size_t dim)
    : dim_(dim), data_(count * dim, 0.0) {
  account(static_cast<long long>(count));
}

Ensemble::Ensemble(const Ensemble& other) : dim_(other.dim_), data_(other.data_) {
  account(static_cast<long long>(size()));
}

Ensemble::Ensemble(Ensemble&& other) noexcept
    : dim_(other.dim_), data_(std::move(other.data_)) {
  other.dim_ = 0;
  other.data_.clear();
}

Ensemble& Ensemble::operator=(const Ensemble& other) {
  if (this == &other) return *this;
  account(static_cast<long long>(other.size()) - static_cast<long long>(size()));
  dim_ = other.dim_;
  data_ = other.data_;
  return *this;
}

Ensemble& Ensemble::operator=(Ensemble&& other) noexcept {
  if (this == &other) return *this;
  account(-static_cast<long long>(size()));
  dim_ = other.dim_;
  data_ = std::move(other.data_);
  other.dim_ = 0;
  other.data_.clear();
  return *this;
}

Ensemble::~Ensemble() { account(-static_cast<long long>(size())); }

Ensemble Ensemble::gaussian(std::size_t count, std::size_t dim, double scale,
                            std::uint64_t seed, std::uint64_t stream_key) {
  Ensemble e(count, dim);
  for (std::size_t r = 0; r < count; ++r) {
    RngStream rng(seed, r, stream_key);
    auto theta = e.particle(r);
    for (std::size_t j = 0; j < dim; ++j) theta[j] = scale * rng.normal();
  }
  return e;
}

bool Ensemble::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

long long Ensemble::live_particles() { return g_live.load(std::memory_order_relaxed); }
long long Ensemble::peak_particles() { return g_peak.load(std::memory_order_relaxed); }
void Ensemble::reset_peak() { g_peak.store(g_live.load(std::memory_order_relaxed)); }

}  // namespace efp
