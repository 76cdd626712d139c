#include "nnfock/exec.hpp"

#include <atomic>

namespace nnfock {

namespace {
std::atomic<ExecPolicy> g_policy{
#ifdef _OPENMP
    ExecPolicy::OpenMP
#else
    ExecPolicy::Serial
#endif
};
}

ExecPolicy default_policy() { return g_policy.load(); }
void set_default_policy(ExecPolicy p) { g_policy.store(p); }

}  // namespace nnfock
