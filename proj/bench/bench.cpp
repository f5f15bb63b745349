#include "gammalab/cuspchar.hpp"
#include "gammalab/exjs.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

using namespace gammalab;

namespace {

double best_of(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, unsigned q, unsigned n, double serial, double parallel, bool same) {
  std::printf("%-16s q=%-2u n=%u  serial %9.4f s  parallel %9.4f s  speedup %5.2f  %s\n", name, q, n, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  const struct {
    unsigned p, n;
  } cases[] = {{2, 3}, {3, 3}, {2, 4}, {5, 2}, {2, 5}};
  for (const auto& c : cases) {
    GroupCtx G(c.p, 1, c.n);
    CuspidalRep rep(G, regular_orbit_reps(G.field(), c.n).front());
    const unsigned q = c.p;

    BesselTable ts = bessel_build_serial(rep), tp = bessel_build(rep);
    const double bs = best_of(3, [&] { ts = bessel_build_serial(rep); });
    const double bp = best_of(3, [&] { tp = bessel_build(rep); });
    row("bessel_build", q, c.n, bs, bp, ts.entries() == tp.entries());

    if (gl_order(q, c.n) <= 2000000) {
      ClassHistogram hs, hp;
      const double hs_t = best_of(1, [&] { hs = class_histogram_serial(G); });
      const double hp_t = best_of(1, [&] { hp = class_histogram_parallel(G); });
      row("class_histogram", q, c.n, hs_t, hp_t, hs == hp);
    }

    FeOptions opt;
    opt.trials = 400;
    const cplx g = gamma_torus(tp).value;
    FeCheck fs, fp;
    const double fs_t = best_of(3, [&] { fs = fe_check_serial(tp, g, opt); });
    const double fp_t = best_of(3, [&] { fp = fe_check(tp, g, opt); });
    row("fe_check", q, c.n, fs_t, fp_t, fs.residual == fp.residual);
  }
}
