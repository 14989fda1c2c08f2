#include "qle/torus.hpp"

#include <fftw3.h>

#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

namespace qle {

namespace {

// FFTW plans are cached per dimension. Plan creation is not thread-safe, so it
// is guarded; execution through the new-array interface is safe. Plans are
// created with FFTW_ESTIMATE (deterministic) and FFTW_UNALIGNED so they apply
// to any std::vector buffer.
class FftPlans {
  public:
    static FftPlans& instance() {
        static FftPlans p;
        return p;
    }

    void forward(std::vector<Complex>& data) { run(data, FFTW_FORWARD); }
    void backward(std::vector<Complex>& data) { run(data, FFTW_BACKWARD); }

  private:
    struct Pair {
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
    };

    void run(std::vector<Complex>& data, int sign) {
        const int n = static_cast<int>(data.size());
        Pair& p = plans_for(n);
        auto* buf = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(sign == FFTW_FORWARD ? p.fwd : p.bwd, buf, buf);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (auto& z : data) z *= scale;
    }

    Pair& plans_for(int n) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(n);
        if (it != cache_.end()) return it->second;
        std::vector<Complex> scratch(n);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        Pair p;
        p.fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        return cache_.emplace(n, p).first->second;
    }

    std::mutex mutex_;
    std::map<int, Pair> cache_;
};

}  // namespace

TorusGrid make_grid(int N) {
    if (N < 2) throw DimensionError("make_grid: N must be >= 2, got " + std::to_string(N));
    TorusGrid g;
    g.N = N;
    g.hbar_eff = kTwoPi / N;
    g.r_sites.resize(N);
    g.p_sites.resize(N);
    g.p_labels.resize(N);
    const int half = N / 2;
    for (int j = 0; j < N; ++j) {
        g.r_sites[j] = kTwoPi * j / N;
        int l = (j + half) % N - half;
        g.p_labels[j] = l;
        g.p_sites[j] = kTwoPi * l / N;
    }
    return g;
}

std::shared_ptr<const TorusGrid> make_shared_grid(int N) {
    return std::make_shared<const TorusGrid>(make_grid(N));
}

StateVector::StateVector(std::shared_ptr<const TorusGrid> grid, Representation rep,
                         std::vector<Complex> amplitudes)
    : grid_(std::move(grid)), rep_(rep), amp_(std::move(amplitudes)) {
    if (static_cast<int>(amp_.size()) != grid_->N)
        throw DimensionError("StateVector: amplitude count does not match grid dimension");
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& z : amp_) s += std::norm(z);
    return std::sqrt(s);
}

void StateVector::normalize() {
    double n = norm();
    if (n == 0.0) throw std::invalid_argument("StateVector::normalize: zero state");
    for (auto& z : amp_) z /= n;
}

void transform_to_momentum(StateVector& psi) {
    if (psi.representation() != Representation::Position)
        throw RepresentationError("to_momentum: state already in momentum representation");
    FftPlans::instance().forward(psi.amp_);
    psi.rep_ = Representation::Momentum;
}

void transform_to_position(StateVector& psi) {
    if (psi.representation() != Representation::Momentum)
        throw RepresentationError("to_position: state already in position representation");
    FftPlans::instance().backward(psi.amp_);
    psi.rep_ = Representation::Position;
}

StateVector to_momentum(const StateVector& psi) {
    StateVector out = psi;
    transform_to_momentum(out);
    return out;
}

StateVector to_position(const StateVector& psi) {
    StateVector out = psi;
    transform_to_position(out);
    return out;
}

StateVector gaussian_packet(const GaussianPacketSpec& spec,
                            std::shared_ptr<const TorusGrid> grid, bool* ill_conditioned) {
    if (spec.xi <= 0.0)
        throw std::invalid_argument("gaussian_packet: dispersion xi must be positive");
    if (ill_conditioned) *ill_conditioned = spec.xi >= kTwoPi;
    const TorusGrid& g = *grid;
    std::vector<Complex> amp(g.N);
    const double inv_hbar = 1.0 / g.hbar_eff;
    const double inv_2xi2 = 1.0 / (2.0 * spec.xi * spec.xi);
    for (int j = 0; j < g.N; ++j) {
        Complex a{0.0, 0.0};
        for (int n = -3; n <= 3; ++n) {
            const double r = g.r_sites[j] + kTwoPi * n;
            const double d = r - spec.r0;
            a += std::polar(std::exp(-d * d * inv_2xi2), spec.p0 * r * inv_hbar);
        }
        amp[j] = a;
    }
    StateVector psi(std::move(grid), Representation::Position, std::move(amp));
    psi.normalize();
    return psi;
}

Complex overlap(const StateVector& psi, const StateVector& phi) {
    if (psi.grid().N != phi.grid().N)
        throw DimensionError("overlap: states live on different grids");
    if (psi.representation() != phi.representation())
        throw RepresentationError("overlap: representation mismatch");
    Complex s{0.0, 0.0};
    const auto& a = psi.amplitudes();
    const auto& b = phi.amplitudes();
    for (std::size_t j = 0; j < a.size(); ++j) s += std::conj(a[j]) * b[j];
    return s;
}

std::string state_to_json(const StateVector& psi) {
    std::ostringstream os;
    os << "{\"N\":" << psi.grid().N << ",\"representation\":\""
       << (psi.representation() == Representation::Position ? "position" : "momentum")
       << "\",\"amplitudes\":[";
    char buf[64];
    const auto& amp = psi.amplitudes();
    for (std::size_t j = 0; j < amp.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "[%.17g,%.17g]", amp[j].real(), amp[j].imag());
        os << (j ? "," : "") << buf;
    }
    os << "]}";
    return os.str();
}

}  // namespace qle
