// Compares the serial law auditor against the OpenMP-partitioned one on
// synthetic lattices large enough for the triple scan to dominate.

#include <chrono>
#include <cstdio>

#include "lq/lattice.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double time_audit(const lq::FiniteLattice& l, bool parallel,
                  lq::LawReport& out) {
  auto t0 = std::chrono::steady_clock::now();
  out = lq::check_laws(l, parallel);
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

bool same_report(const lq::LawReport& a, const lq::LawReport& b) {
  if (a.laws.size() != b.laws.size()) return false;
  for (const auto& [name, ra] : a.laws) {
    auto it = b.laws.find(name);
    if (it == b.laws.end()) return false;
    if (ra.pass != it->second.pass || ra.witness != it->second.witness)
      return false;
  }
  return true;
}

void bench_one(const lq::FiniteLattice& l) {
  lq::LawReport serial, par;
  double ts = time_audit(l, false, serial);
  double tp = time_audit(l, true, par);
  std::printf("%-12s n=%4d  serial %9.2f ms  parallel %9.2f ms  x%.2f  %s\n",
              l.name().c_str(), l.size(), ts, tp, tp > 0 ? ts / tp : 0.0,
              same_report(serial, par) ? "reports equal" : "REPORTS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel path falls back to serial\n");
#endif
  bench_one(lq::build_proj2());
  bench_one(lq::build_boolean(6));
  bench_one(lq::build_boolean(8));
  bench_one(lq::build_diamond(120));
  bench_one(lq::build_diamond(250));
  return 0;
}
