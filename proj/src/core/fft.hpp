#pragma once

#include <complex>

namespace kqm {

// In-place batched complex FFT: `howmany` transforms of length n, element
// stride `stride`, successive transforms `dist` apart. Unnormalized.
class FftPlan {
  public:
    enum class Direction { forward, backward };

    FftPlan(int n, int howmany, int stride, int dist, Direction dir);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    void execute(std::complex<double>* data) const;
    int size() const { return n_; }

  private:
    void* plan_ = nullptr;
    int n_;
};

}  // namespace kqm
