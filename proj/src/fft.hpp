#pragma once

#include "fields.hpp"

namespace calkit {

/// In-place 3D complex DFT pair on an M^3 work buffer, row-major with the
/// first axis slowest (the QField layout).  Both directions are unnormalized;
/// divide by size() after a forward+inverse round trip.  Plans are created
/// with FFTW_ESTIMATE so planning never touches the buffer and repeated runs
/// are bit-identical.  Instances are not thread-safe; use one per task.
class Fourier3 {
public:
    explicit Fourier3(int M);
    ~Fourier3();
    Fourier3(const Fourier3&) = delete;
    Fourier3& operator=(const Fourier3&) = delete;

    int M() const { return M_; }
    long size() const { return static_cast<long>(M_) * M_ * M_; }
    cplx* data() { return buf_; }

    void forward();
    void inverse();

private:
    int M_ = 0;
    cplx* buf_ = nullptr;
    void* fwd_ = nullptr; // fftw_plan
    void* inv_ = nullptr;
};

} // namespace calkit
