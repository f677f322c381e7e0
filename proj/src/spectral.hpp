#pragma once

#include <complex>
#include <vector>

#include <fftw3.h>

namespace inls {

/// Owns FFTW plans for one Cartesian grid (1D or 2D complex transforms).
/// Plans are created once under a global planner lock (FFTW's planner is not
/// thread-safe); execution on caller buffers is thread-safe. Plans use
/// FFTW_ESTIMATE | FFTW_UNALIGNED so plan choice and results are deterministic.
class SpectralEngine {
  public:
    SpectralEngine(const std::vector<int>& shape);
    ~SpectralEngine();

    SpectralEngine(const SpectralEngine&) = delete;
    SpectralEngine& operator=(const SpectralEngine&) = delete;

    std::size_t size() const { return n_; }

    // unnormalized forward DFT
    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    // unnormalized backward DFT (caller divides by size())
    void backward(const std::complex<double>* in, std::complex<double>* out) const;

  private:
    std::size_t n_ = 0;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

} // namespace inls
