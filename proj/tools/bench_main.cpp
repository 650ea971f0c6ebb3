// Benchmark comparing the serial reference kernel against the OpenMP one on
// the exact-arithmetic products that dominate the invariant suites.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "eposic/channels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using eposic::CGIndex;
using eposic::LinOp;

double time_ms(const std::function<LinOp()>& fn, int repeats, LinOp& last) {
  double best = 0.0;
  for (int i = 0; i < repeats; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    last = fn();
    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (i == 0 || ms < best) best = ms;
  }
  return best;
}

void bench_product(const std::string& name, const LinOp& a, const LinOp& b, int repeats) {
  LinOp serial_out, parallel_out;
  double serial_ms = time_ms([&] { return eposic::compose_serial(a, b); }, repeats, serial_out);
  double parallel_ms = time_ms([&] { return eposic::compose_parallel(a, b); }, repeats, parallel_out);
  if (!(serial_out == parallel_out)) {
    std::printf("%-36s MISMATCH between kernels\n", name.c_str());
    return;
  }
  std::printf("%-36s %4d x %-4d  serial %9.2f ms   parallel %9.2f ms   speedup %.2fx\n", name.c_str(),
              a.rows(), b.cols(), serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  int repeats = 3;
  int max_m = 5;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--repeats" && i + 1 < argc)
      repeats = std::atoi(argv[++i]);
    else if (arg == "--max-degree" && i + 1 < argc)
      max_m = std::atoi(argv[++i]);
    else {
      std::fprintf(stderr, "usage: eposic-bench [--repeats N] [--max-degree M]\n");
      return 2;
    }
  }
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; both kernels run serially\n");
#endif

  for (int m = 3; m <= max_m; ++m) {
    const int r = 2 * m;  // largest input degree reached from (m, m, 0)
    LinOp embedding = eposic::eta(CGIndex(m, r, m));
    LinOp embedding_adj = eposic::adjoint(embedding);
    bench_product("projector q(" + std::to_string(m) + "," + std::to_string(r) + ")", embedding,
                  embedding_adj, repeats);
    const LinOp& q = eposic::projection_q(m, r, m);
    bench_product("projector square, dim " + std::to_string(q.rows()), q, q, repeats);
  }

  // Dense Gaussian-rational matrices, the worst case for term growth.
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
  const eposic::SpaceLabel big = eposic::SpaceLabel::poly(max_m).tensor(eposic::SpaceLabel::poly(max_m));
  LinOp dense(big, big);
  for (int rr = 0; rr < dense.rows(); ++rr)
    for (int cc = 0; cc < dense.cols(); ++cc)
      dense.at(rr, cc) = eposic::ExactScalar(
          eposic::GaussianRational(eposic::Rational(num(rng), den(rng)), eposic::Rational(num(rng), den(rng))));
  bench_product("dense gaussian-rational square", dense, dense, repeats);
  return 0;
}
