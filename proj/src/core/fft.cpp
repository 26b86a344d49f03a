#include "core/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

namespace kqm {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

FftPlan::FftPlan(int n, int howmany, int stride, int dist, Direction dir) : n_(n) {
    std::size_t extent = std::size_t(n - 1) * stride + std::size_t(howmany - 1) * dist + 1;
    std::vector<std::complex<double>> scratch(extent);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_many_dft(1, &n, howmany, p, nullptr, stride, dist, p, nullptr, stride, dist, sign,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
}

FftPlan::~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void FftPlan::execute(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(plan_), p, p);
}

}  // namespace kqm
