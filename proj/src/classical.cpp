#include "qle/classical.hpp"

#include <algorithm>
#include <cstdio>

#include "qle/rng.hpp"

namespace qle {

PhasePoint step_sawtooth(const PhasePoint& x, double K) {
    PhasePoint y;
    y.p = mod_2pi(x.p + K * (x.r - std::numbers::pi));
    y.r = mod_2pi(x.r + y.p);
    return y;
}

PhasePoint step_standard(const PhasePoint& x, double K) {
    PhasePoint y;
    y.p = mod_2pi(x.p + K * std::sin(x.r));
    y.r = mod_2pi(x.r + y.p);
    return y;
}

PhasePoint step_map(MapKind kind, const PhasePoint& x, double K) {
    return kind == MapKind::Sawtooth ? step_sawtooth(x, K) : step_standard(x, K);
}

TangentVector tangent_step(MapKind kind, const PhasePoint& x, const TangentVector& v, double K) {
    const double c = kind == MapKind::Sawtooth ? K : K * std::cos(x.r);
    TangentVector w;
    w.dp = v.dp + c * v.dr;
    w.dr = v.dr + w.dp;
    return w;
}

double sawtooth_lyapunov(double K) {
    const double s = 2.0 + K;
    return std::log(0.5 * (s + std::sqrt(s * s - 4.0)));
}

namespace {

double tangent_norm(const TangentVector& v) { return std::hypot(v.dr, v.dp); }

struct WalkState {
    PhasePoint x;
    TangentVector v;
};

// Uniform point plus a warmed-up tangent: evolve a random unit vector for
// `warmup` steps so it aligns with the local unstable direction. For the
// sawtooth (constant Jacobian) the alignment is exact to rounding.
WalkState seeded_walker(MapKind kind, double K, std::mt19937_64& rng, int warmup) {
    WalkState w;
    w.x = {uniform(rng, 0.0, kTwoPi), uniform(rng, 0.0, kTwoPi)};
    const double th = uniform(rng, 0.0, kTwoPi);
    w.v = {std::cos(th), std::sin(th)};
    for (int s = 0; s < warmup; ++s) {
        TangentVector t = tangent_step(kind, w.x, w.v, K);
        const double n = tangent_norm(t);
        w.v = {t.dr / n, t.dp / n};
        w.x = step_map(kind, w.x, K);
    }
    return w;
}

}  // namespace

TrajectoryEnsemble sample_ensemble(MapKind kind, double K, int n_traj, std::uint64_t seed,
                                   int warmup) {
    TrajectoryEnsemble ens;
    ens.seed = seed;
    ens.points.resize(n_traj);
    ens.tangents.resize(n_traj);
    ens.log_stretch.assign(n_traj, 0.0);
    for (int i = 0; i < n_traj; ++i) {
        auto rng = task_rng(seed, static_cast<std::uint64_t>(i));
        WalkState w = seeded_walker(kind, K, rng, warmup);
        ens.points[i] = w.x;
        ens.tangents[i] = w.v;
    }
    return ens;
}

void ensemble_step(TrajectoryEnsemble& ens, MapKind kind, double K) {
    for (std::size_t i = 0; i < ens.points.size(); ++i) {
        TangentVector t = tangent_step(kind, ens.points[i], ens.tangents[i], K);
        const double n = tangent_norm(t);
        ens.log_stretch[i] += std::log(n);
        ens.tangents[i] = {t.dr / n, t.dp / n};
        ens.points[i] = step_map(kind, ens.points[i], K);
    }
}

LyapunovEstimate lyapunov_exponent(MapKind kind, double K, int n_traj, int t_max,
                                   std::uint64_t seed, ExecPolicy policy) {
    if (t_max < 1000) throw std::invalid_argument("lyapunov_exponent: t_max must be >= 1000");
    std::vector<double> per_traj(n_traj, 0.0);
    const bool parallel = policy == ExecPolicy::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n_traj; ++i) {
        auto rng = task_rng(seed, static_cast<std::uint64_t>(i));
        WalkState w = seeded_walker(kind, K, rng, 64);
        double L = 0.0;
        for (int t = 0; t < t_max; ++t) {
            TangentVector tv = tangent_step(kind, w.x, w.v, K);
            const double n = tangent_norm(tv);
            L += std::log(n);
            w.v = {tv.dr / n, tv.dp / n};
            w.x = step_map(kind, w.x, K);
        }
        per_traj[i] = L / t_max;
    }
    LyapunovEstimate est;
    for (double v : per_traj) est.value += v;
    est.value /= n_traj;
    if (n_traj > 1) {
        double ss = 0.0;
        for (double v : per_traj) ss += (v - est.value) * (v - est.value);
        est.stderr_ = std::sqrt(ss / (static_cast<double>(n_traj) * (n_traj - 1)));
    }
    est.warning = est.value < 10.0 * est.stderr_;
    return est;
}

std::vector<double> lambda1_of_t(MapKind kind, double K, int n_traj, int t_max,
                                 std::uint64_t seed, ExecPolicy policy) {
    if (n_traj < 100) throw std::invalid_argument("lambda1_of_t: n_traj must be >= 100");
    // log_stretch L_i(t) per trajectory; Lambda1(t) from ln<exp(-L_i)> via
    // log-sum-exp over the trajectory index.
    std::vector<std::vector<double>> L(n_traj);
    const bool parallel = policy == ExecPolicy::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n_traj; ++i) {
        auto rng = task_rng(seed, static_cast<std::uint64_t>(i));
        WalkState w = seeded_walker(kind, K, rng, 64);
        L[i].resize(t_max + 1);
        L[i][0] = 0.0;
        double acc = 0.0;
        for (int t = 1; t <= t_max; ++t) {
            TangentVector tv = tangent_step(kind, w.x, w.v, K);
            const double n = tangent_norm(tv);
            acc += std::log(n);
            L[i][t] = acc;
            w.v = {tv.dr / n, tv.dp / n};
            w.x = step_map(kind, w.x, K);
        }
    }
    std::vector<double> lam(t_max + 1, 0.0);
    for (int t = 1; t <= t_max; ++t) {
        double lmin = L[0][t];
        for (int i = 1; i < n_traj; ++i) lmin = std::min(lmin, L[i][t]);
        double s = 0.0;
        for (int i = 0; i < n_traj; ++i) s += std::exp(-(L[i][t] - lmin));
        lam[t] = -(-lmin + std::log(s / n_traj)) / t;
    }
    return lam;
}

CorrelationSeries potential_correlation(MapKind kind, double K, int l_max, int n_traj,
                                        long traj_len, std::uint64_t seed, ExecPolicy policy) {
    if (traj_len <= l_max + 1)
        throw std::invalid_argument("potential_correlation: trajectory shorter than l_max");
    std::vector<std::vector<double>> per_traj(n_traj);
    const bool parallel = policy == ExecPolicy::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n_traj; ++i) {
        auto rng = task_rng(seed, static_cast<std::uint64_t>(i));
        PhasePoint x{uniform(rng, 0.0, kTwoPi), uniform(rng, 0.0, kTwoPi)};
        std::vector<double> v(traj_len);
        for (long t = 0; t < traj_len; ++t) {
            v[t] = kick_potential(kind, x.r);
            x = step_map(kind, x, K);
        }
        double mean = 0.0;
        for (double w : v) mean += w;
        mean /= traj_len;
        for (double& w : v) w -= mean;
        std::vector<double> c(l_max + 1, 0.0);
        for (int l = 0; l <= l_max; ++l) {
            double s = 0.0;
            for (long t = 0; t + l < traj_len; ++t) s += v[t] * v[t + l];
            c[l] = s / static_cast<double>(traj_len - l);
        }
        per_traj[i] = std::move(c);
    }
    CorrelationSeries out;
    out.C.assign(l_max + 1, 0.0);
    out.stderr_.assign(l_max + 1, 0.0);
    out.n_samples = n_traj;
    out.model = map_name(kind);
    out.K = K;
    for (int i = 0; i < n_traj; ++i)
        for (int l = 0; l <= l_max; ++l) out.C[l] += per_traj[i][l];
    for (int l = 0; l <= l_max; ++l) out.C[l] /= n_traj;
    if (n_traj > 1) {
        for (int i = 0; i < n_traj; ++i)
            for (int l = 0; l <= l_max; ++l) {
                const double d = per_traj[i][l] - out.C[l];
                out.stderr_[l] += d * d;
            }
        for (int l = 0; l <= l_max; ++l)
            out.stderr_[l] = std::sqrt(out.stderr_[l] /
                                       (static_cast<double>(n_traj) * (n_traj - 1)));
    }
    return out;
}

ActionDiffusion action_diffusion(const CorrelationSeries& corr) {
    if (corr.C.empty()) throw std::invalid_argument("action_diffusion: empty correlation");
    ActionDiffusion out;
    out.R = 0.5 * corr.C[0];
    for (std::size_t l = 1; l < corr.C.size(); ++l) out.R += corr.C[l];
    // Tail check over the last quarter of the lags.
    const std::size_t l_max = corr.C.size() - 1;
    if (l_max >= 4) {
        for (std::size_t l = l_max - l_max / 4; l <= l_max; ++l) {
            if (std::abs(corr.C[l]) > 3.0 * corr.stderr_[l]) out.tail_warning = true;
        }
    }
    return out;
}

double delta_s_bin_width(double hbar, double range) {
    return std::min(hbar / 8.0, range / 512.0);
}

namespace {

struct SampleBlock {
    std::vector<double> values;
};

DeltaSHistogram bin_samples(std::vector<SampleBlock>& blocks, double hbar) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    std::uint64_t n = 0;
    for (const auto& b : blocks)
        for (double s : b.values) {
            if (first) {
                lo = hi = s;
                first = false;
            } else {
                lo = std::min(lo, s);
                hi = std::max(hi, s);
            }
            ++n;
        }
    DeltaSHistogram h;
    if (n == 0) return h;
    const double range = hi - lo;
    h.bin_width = range > 0.0 ? delta_s_bin_width(hbar, range) : hbar / 8.0;
    h.lo = lo;
    const std::size_t n_bins =
        range > 0.0 ? static_cast<std::size_t>(range / h.bin_width) + 1 : 1;
    h.counts.assign(n_bins, 0.0);
    for (const auto& b : blocks)
        for (double s : b.values) {
            std::size_t k = static_cast<std::size_t>((s - lo) / h.bin_width);
            if (k >= n_bins) k = n_bins - 1;
            h.counts[k] += 1.0;
            h.sum += s;
            h.sum_sq += s * s;
        }
    h.n_samples = n;
    return h;
}

}  // namespace

DeltaSHistogram action_difference_distribution(MapKind kind, double K, double sigma, double hbar,
                                               const GaussianPacketSpec& packet, int t,
                                               long n_samples, std::uint64_t seed,
                                               ExecPolicy policy) {
    const double eps = sigma * hbar;
    const double xi = packet.xi > 0.0 ? packet.xi : std::sqrt(hbar);
    const double wp = momentum_width(xi, hbar);
    const int n_blocks = 64;
    std::vector<SampleBlock> blocks(n_blocks);
    const bool parallel = policy == ExecPolicy::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (int b = 0; b < n_blocks; ++b) {
        auto rng = task_rng(seed, static_cast<std::uint64_t>(b));
        const long lo = n_samples * b / n_blocks;
        const long hi = n_samples * (b + 1) / n_blocks;
        blocks[b].values.reserve(hi - lo);
        for (long s = lo; s < hi; ++s) {
            PhasePoint x{packet.r0, mod_2pi(normal(rng, packet.p0, wp))};
            double acc = 0.0;
            for (int step = 0; step < t; ++step) {
                acc += kick_potential(kind, x.r);
                x = step_map(kind, x, K);
            }
            blocks[b].values.push_back(eps * acc);
        }
    }
    return bin_samples(blocks, hbar);
}

DeltaSHistogram ensemble_action_distribution(MapKind kind, double K, double sigma, double hbar,
                                             double xi, int n_centers, long samples_per_center,
                                             int t, std::uint64_t seed, ExecPolicy policy) {
    const double eps = sigma * hbar;
    const double width = xi > 0.0 ? xi : std::sqrt(hbar);
    const double wp = momentum_width(width, hbar);
    std::vector<SampleBlock> blocks(n_centers);
    const bool parallel = policy == ExecPolicy::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (int c = 0; c < n_centers; ++c) {
        auto rng = task_rng(seed, static_cast<std::uint64_t>(c));
        const double r0 = uniform(rng, 0.0, kTwoPi);
        const double p0c = uniform(rng, 0.0, kTwoPi);
        blocks[c].values.reserve(samples_per_center);
        for (long s = 0; s < samples_per_center; ++s) {
            PhasePoint x{r0, mod_2pi(normal(rng, p0c, wp))};
            double acc = 0.0;
            for (int step = 0; step < t; ++step) {
                acc += kick_potential(kind, x.r);
                x = step_map(kind, x, K);
            }
            blocks[c].values.push_back(eps * acc);
        }
    }
    return bin_samples(blocks, hbar);
}

double semiclassical_echo_from_distribution(const DeltaSHistogram& hist, double hbar) {
    if (hist.n_samples == 0)
        throw std::invalid_argument("semiclassical_echo_from_distribution: empty histogram");
    if (hist.counts.size() > 1 && hist.bin_width > hbar)
        throw AliasingError("bin width exceeds hbar; histogram cannot resolve the phase");
    Complex z{0.0, 0.0};
    const double total = static_cast<double>(hist.n_samples);
    for (std::size_t k = 0; k < hist.counts.size(); ++k) {
        if (hist.counts[k] == 0.0) continue;
        const double sk = hist.lo + (static_cast<double>(k) + 0.5) * hist.bin_width;
        z += (hist.counts[k] / total) * std::polar(1.0, sk / hbar);
    }
    return std::norm(z);
}

double time_average_observable(MapKind kind, double K, const PhasePoint& x0, int t) {
    if (t < 1) return kick_potential(kind, x0.r);
    PhasePoint x = x0;
    double acc = 0.0;
    for (int s = 0; s < t; ++s) {
        acc += kick_potential(kind, x.r);
        x = step_map(kind, x, K);
    }
    return acc / t;
}

}  // namespace qle
