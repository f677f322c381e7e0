#include "spectral.hpp"

#include <mutex>
#include <stdexcept>

namespace inls {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

SpectralEngine::SpectralEngine(const std::vector<int>& shape) {
    n_ = 1;
    for (int c : shape) n_ *= static_cast<std::size_t>(c);
    std::vector<std::complex<double>> buf(n_);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (shape.size() == 1) {
        fwd_ = fftw_plan_dft_1d(shape[0], p, p, FFTW_FORWARD, flags);
        bwd_ = fftw_plan_dft_1d(shape[0], p, p, FFTW_BACKWARD, flags);
    } else if (shape.size() == 2) {
        fwd_ = fftw_plan_dft_2d(shape[0], shape[1], p, p, FFTW_FORWARD, flags);
        bwd_ = fftw_plan_dft_2d(shape[0], shape[1], p, p, FFTW_BACKWARD, flags);
    } else {
        throw std::invalid_argument("SpectralEngine: only 1D/2D Cartesian grids supported");
    }
    if (!fwd_ || !bwd_) throw std::runtime_error("SpectralEngine: FFTW plan creation failed");
}

SpectralEngine::~SpectralEngine() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(fwd_);
    if (bwd_) fftw_destroy_plan(bwd_);
}

void SpectralEngine::forward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void SpectralEngine::backward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

} // namespace inls
