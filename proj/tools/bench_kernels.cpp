// Timings of the serial reference kernels against the FFTW/OpenMP ones.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#include "CLI11.hpp"
#include "hch/integrator.hpp"
#include "hch/reference.hpp"
#include "hch/sine_transform.hpp"
#include "hch/spectral.hpp"

namespace {

template <class F>
double seconds_per_call(F&& f, int reps) {
  f();
  double best = 1e300;
  for (int trial = 0; trial < 5; ++trial) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count() / reps);
  }
  return best;
}

double transform_pair(std::size_t n, int reps, bool reference) {
  const hch::GridSpec grid(n, 3.141592653589793);
  const hch::ModalField z = hch::random_band_limited(grid, n, 1.0, 1);
  const std::size_t p = hch::transform::dealias_points(n);
  std::vector<double> nodal(p * p), back(n * n);
  return seconds_per_call(
      [&] {
        if (reference) {
          hch::reference::synthesize(z.coeff(), n, p, hch::transform::Basis::Sine, hch::transform::Basis::Sine, nodal);
          hch::reference::analyze(nodal, p, n, back);
        } else {
          hch::transform::synthesize(z.coeff(), n, p, hch::transform::Basis::Sine, hch::transform::Basis::Sine, nodal);
          hch::transform::analyze(nodal, p, n, back);
        }
      },
      reps);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bench_kernels"};
  std::vector<std::size_t> sizes{32, 64, 128};
  std::size_t steps = 200;
  app.add_option("--sizes", sizes, "mode counts");
  app.add_option("--steps", steps, "IMEX steps per timing");
  CLI11_PARSE(app, argc, argv);

  const int threads = hch::transform::max_threads();
  std::printf("%6s %6s %14s %14s %14s %14s\n", "N", "P", "reference[s]", "fftw_1t[s]", "fftw_mt[s]", "imex_step[s]");
  for (std::size_t n : sizes) {
    const int reps = n <= 64 ? 50 : 10;
    const double ref = n <= 64 ? transform_pair(n, 1, true) : -1.0;
    hch::transform::set_threads(1);
    const double one = transform_pair(n, reps, false);
    hch::transform::set_threads(threads);
    const double multi = transform_pair(n, reps, false);

    const hch::GridSpec grid(n, 3.141592653589793);
    hch::Integrator integ(hch::Model(grid, hch::Nonlinearity(), hch::SourceTerm::zero(grid)), hch::SchemeConfig{},
                          hch::State(hch::random_band_limited(grid, 4, 1.0, 3), hch::ModalField(grid)));
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < steps; ++i) integ.step();
    const double per_step =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / static_cast<double>(steps);
    std::printf("%6zu %6zu %14.6e %14.6e %14.6e %14.6e\n", n, hch::transform::dealias_points(n), ref, one, multi,
                per_step);
  }
  std::printf("threads available: %d\n", threads);
  return 0;
}
