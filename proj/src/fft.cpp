#include "fft.hpp"

#include <mutex>
#include <new>

#include <fftw3.h>

#include "errors.hpp"

namespace calkit {

namespace {

// The FFTW planner mutates global state; serialize plan creation and
// destruction.  Executing distinct plans concurrently is fine.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

Fourier3::Fourier3(int M) : M_(M) {
    if (M < 2) throw Error(errc::bad_argument, "Fourier3: M must be at least 2");
    const long n = size();
    buf_ = static_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!buf_) throw std::bad_alloc();

    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* raw = reinterpret_cast<fftw_complex*>(buf_);
    fwd_ = fftw_plan_dft_3d(M, M, M, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_3d(M, M, M, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd_ || !inv_) {
        if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
        if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
        fftw_free(buf_);
        throw Error(errc::internal, "Fourier3: FFTW plan creation failed");
    }
}

Fourier3::~Fourier3() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
    fftw_free(buf_);
}

void Fourier3::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void Fourier3::inverse() { fftw_execute(static_cast<fftw_plan>(inv_)); }

} // namespace calkit
