#ifndef NNFOCK_EXEC_HPP
#define NNFOCK_EXEC_HPP

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nnfock {

/// Kernel dispatch. Every parallel kernel keeps a serial reference path;
/// tests assert both produce identical results and the benchmark target
/// compares their timings.
enum class ExecPolicy { Serial, OpenMP };

ExecPolicy default_policy();
void set_default_policy(ExecPolicy p);

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// parallel_for(n, body): body(i) for i in [0, n).
template <class Body>
void parallel_for(std::size_t n, ExecPolicy policy, Body&& body) {
  if (policy == ExecPolicy::OpenMP) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
#endif
  }
  for (std::size_t i = 0; i < n; ++i) body(i);
}

/// Deterministic sum reduction: per-thread partials combined in index order,
/// so rational-mode results are bit-identical across policies.
template <class T, class Term>
T parallel_sum(std::size_t n, ExecPolicy policy, T zero, Term&& term) {
  if (policy == ExecPolicy::OpenMP) {
#ifdef _OPENMP
    int nt = omp_get_max_threads();
    std::vector<T> partial(static_cast<std::size_t>(nt), zero);
#pragma omp parallel
    {
      int t = omp_get_thread_num();
      T local = zero;
#pragma omp for schedule(static)
      for (long long i = 0; i < static_cast<long long>(n); ++i)
        local = local + term(static_cast<std::size_t>(i));
      partial[static_cast<std::size_t>(t)] = local;
    }
    T total = zero;
    for (const auto& p : partial) total = total + p;
    return total;
#endif
  }
  T total = zero;
  for (std::size_t i = 0; i < n; ++i) total = total + term(i);
  return total;
}

}  // namespace nnfock

#endif
