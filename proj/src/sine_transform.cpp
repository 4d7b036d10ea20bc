#include "hch/sine_transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hch::transform {
namespace {

// FFTW's planner is not thread-safe; execution with fftw_execute_r2r is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(fftw_r2r_kind kind, int size) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(static_cast<int>(kind), size);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<double> scratch(static_cast<std::size_t>(size));
    fftw_plan plan = fftw_plan_r2r_1d(size, scratch.data(), scratch.data(), kind, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

// One pass along the contiguous axis: each of `rows` input rows holds
// `in_cols` coefficients (index 1..in_cols); each output row receives
// `out_cols` values sum_j x_j b(j p) for p = 1..out_cols.
void row_pass(const double* in, std::size_t rows, std::size_t in_cols, double* out, std::size_t out_cols,
              std::size_t points, Basis basis) {
  const bool sine = basis == Basis::Sine;
  const std::size_t size = sine ? points : points + 2;
  const std::size_t offset = sine ? 0 : 1;
  fftw_plan plan = plans().get(sine ? FFTW_RODFT00 : FFTW_REDFT00, static_cast<int>(size));

#pragma omp parallel
  {
    std::vector<double> buf(size);
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows); ++r) {
      std::fill(buf.begin(), buf.end(), 0.0);
      const double* src = in + static_cast<std::size_t>(r) * in_cols;
      std::copy(src, src + in_cols, buf.begin() + static_cast<std::ptrdiff_t>(offset));
      fftw_execute_r2r(plan, buf.data(), buf.data());
      double* dst = out + static_cast<std::size_t>(r) * out_cols;
      for (std::size_t p = 0; p < out_cols; ++p) dst[p] = 0.5 * buf[p + offset];
    }
  }
}

void transpose(const double* in, std::size_t rows, std::size_t cols, double* out) {
  constexpr std::size_t block = 32;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t rb = 0; rb < static_cast<std::ptrdiff_t>(rows); rb += block) {
    const std::size_t r0 = static_cast<std::size_t>(rb);
    const std::size_t r1 = std::min(rows, r0 + block);
    for (std::size_t c0 = 0; c0 < cols; c0 += block) {
      const std::size_t c1 = std::min(cols, c0 + block);
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) out[c * rows + r] = in[r * cols + c];
    }
  }
}

// Per-thread scratch reused across calls; fresh large blocks would be page-faulted in on every transform.
std::span<double> scratch(int slot, std::size_t size) {
  thread_local std::vector<double> buffers[3];
  auto& v = buffers[slot];
  if (v.size() < size) v.resize(size);
  return {v.data(), size};
}

bool is_7smooth(std::size_t m) {
  for (std::size_t f : {2u, 3u, 5u, 7u})
    while (m % f == 0) m /= f;
  return m == 1;
}

}  // namespace

void synthesize(std::span<const double> coeff, std::size_t n, std::size_t points, Basis bx, Basis by,
                std::span<double> out) {
  if (coeff.size() != n * n || out.size() != points * points || points < n)
    throw std::invalid_argument("synthesize: inconsistent sizes");
  const std::span<double> ct = scratch(0, n * n), a = scratch(1, n * points), b = scratch(2, points * n);
  transpose(coeff.data(), n, n, ct.data());                  // rows k, cols j
  row_pass(ct.data(), n, n, a.data(), points, points, bx);   // along j -> p
  transpose(a.data(), n, points, b.data());                  // rows p, cols k
  row_pass(b.data(), points, n, out.data(), points, points, by);  // along k -> q
}

void analyze(std::span<const double> values, std::size_t points, std::size_t n, std::span<double> out) {
  if (values.size() != points * points || out.size() != n * n || points < n)
    throw std::invalid_argument("analyze: inconsistent sizes");
  const std::span<double> a = scratch(1, points * n), b = scratch(2, n * points), c = scratch(0, n * n);
  row_pass(values.data(), points, points, a.data(), n, points, Basis::Sine);  // along q -> k
  transpose(a.data(), points, n, b.data());                                   // rows k, cols p
  row_pass(b.data(), n, points, c.data(), n, points, Basis::Sine);  // along p -> j
  transpose(c.data(), n, n, out.data());
}

std::size_t dealias_points(std::size_t n) {
  std::size_t m = 2 * n + 1;
  while (!is_7smooth(m)) ++m;
  return m - 1;
}

std::size_t fine_points(std::size_t n) { return 4 * (n + 1) - 1; }

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(std::max(1, n));
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace hch::transform
