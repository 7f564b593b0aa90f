#ifndef LEDFANO_SPECTRUM_HPP
#define LEDFANO_SPECTRUM_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ledfano/constants.hpp"

namespace ledfano {

// In-place iterative radix-2 FFT; size must be a power of two.
inline void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * constants::pi / double(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

struct SpectrumEstimate {
    std::vector<double> omega;        // requested grid [rad/s]
    std::vector<double> omega_eff;    // mean frequency of the bins actually used
    std::vector<double> W_ph;         // estimated Fano factor
    std::vector<double> stderr_W;     // NaN when fewer than two segments
    std::size_t n_segments = 0;
};

// Welch estimator of W_ph(Omega) = S_NN(Omega)/N0: Hann window, 50% overlap,
// periodogram bins averaged over a +-band_frac band around each grid point.
// Normalized so white noise of density D estimates D (shot noise -> W_ph = 1).
class FanoEstimator {
public:
    FanoEstimator(std::vector<double> omega_grid, double dt, std::size_t segment_length,
                  double band_frac = 0.15)
        : omega_(std::move(omega_grid)), dt_(dt), L_(segment_length), band_frac_(band_frac) {
        if (!(dt_ > 0.0)) throw std::invalid_argument("dt must be > 0");
        if (L_ < 8 || (L_ & (L_ - 1)) != 0)
            throw std::invalid_argument("segment_length must be a power of two >= 8");
        window_.resize(L_);
        wss_ = 0.0;
        for (std::size_t n = 0; n < L_; ++n) {
            window_[n] = 0.5 * (1.0 - std::cos(2.0 * constants::pi * double(n) / double(L_)));
            wss_ += window_[n] * window_[n];
        }
        // Bin k holds omega_k = 2 pi k / (L dt); DC and Nyquist are excluded.
        const std::size_t kmax = L_ / 2 - 1;
        const double domega = 2.0 * constants::pi / (double(L_) * dt_);
        for (double om : omega_) {
            if (!(om > 0.0)) throw std::invalid_argument("omega grid must be positive");
            std::size_t klo = std::size_t(std::ceil(om / (1.0 + band_frac_) / domega));
            std::size_t khi = std::size_t(std::floor(om * (1.0 + band_frac_) / domega));
            if (klo < 1) klo = 1;
            if (khi > kmax) khi = kmax;
            if (klo > khi) {
                // Narrow band: fall back to the nearest usable bin.
                std::size_t k = std::size_t(std::llround(om / domega));
                if (k < 1) k = 1;
                if (k > kmax) k = kmax;
                klo = khi = k;
            }
            std::vector<std::size_t> bins;
            double om_eff = 0.0;
            for (std::size_t k = klo; k <= khi; ++k) {
                bins.push_back(k);
                om_eff += double(k) * domega;
            }
            om_eff /= double(bins.size());
            bins_.push_back(std::move(bins));
            omega_eff_.push_back(om_eff);
        }
        values_.resize(omega_.size());
    }

    std::size_t segments_in(std::size_t series_length) const {
        return series_length < L_ ? 0 : (series_length - L_) / (L_ / 2) + 1;
    }

    void add_series(const std::vector<double>& x) {
        std::vector<std::complex<double>> buf(L_);
        for (std::size_t start = 0; start + L_ <= x.size(); start += L_ / 2) {
            for (std::size_t n = 0; n < L_; ++n)
                buf[n] = std::complex<double>(window_[n] * x[start + n], 0.0);
            fft_radix2(buf);
            for (std::size_t p = 0; p < omega_.size(); ++p) {
                double acc = 0.0;
                for (std::size_t k : bins_[p]) acc += std::norm(buf[k]);
                values_[p].push_back(acc * dt_ / (wss_ * double(bins_[p].size())));
            }
            ++n_segments_;
        }
    }

    // Averages an analytic spectrum over exactly the bins used per grid point,
    // for a bias-free overlay against the estimate.
    template <typename F>
    std::vector<double> band_average(F&& spectrum) const {
        const double domega = 2.0 * constants::pi / (double(L_) * dt_);
        std::vector<double> out;
        for (const auto& bins : bins_) {
            double acc = 0.0;
            for (std::size_t k : bins) acc += spectrum(double(k) * domega);
            out.push_back(acc / double(bins.size()));
        }
        return out;
    }

    SpectrumEstimate finalize(double N0) const {
        if (!(N0 > 0.0)) throw std::invalid_argument("N0 must be > 0");
        SpectrumEstimate est;
        est.omega = omega_;
        est.omega_eff = omega_eff_;
        est.n_segments = n_segments_;
        for (std::size_t p = 0; p < omega_.size(); ++p) {
            const auto& v = values_[p];
            double mean = 0.0;
            for (double s : v) mean += s;
            mean /= double(v.size());
            est.W_ph.push_back(mean / N0);
            if (v.size() > 1) {
                double ss = 0.0;
                for (double s : v) ss += (s - mean) * (s - mean);
                const double sd = std::sqrt(ss / double(v.size() - 1));
                est.stderr_W.push_back(sd / std::sqrt(double(v.size())) / N0);
            } else {
                est.stderr_W.push_back(std::numeric_limits<double>::quiet_NaN());
            }
        }
        return est;
    }

    // Appends another estimator's per-segment values; call in a fixed order
    // to keep results independent of scheduling.
    void absorb(const FanoEstimator& other) {
        if (other.values_.size() != values_.size())
            throw std::invalid_argument("absorb: mismatched omega grids");
        for (std::size_t p = 0; p < values_.size(); ++p)
            values_[p].insert(values_[p].end(), other.values_[p].begin(),
                              other.values_[p].end());
        n_segments_ += other.n_segments_;
    }

    std::size_t n_segments() const { return n_segments_; }
    const std::vector<std::vector<std::size_t>>& bins() const { return bins_; }
    std::size_t segment_length() const { return L_; }

private:
    std::vector<double> omega_;
    double dt_;
    std::size_t L_;
    double band_frac_;
    std::vector<double> window_;
    double wss_ = 0.0;
    std::vector<double> omega_eff_;
    std::vector<std::vector<std::size_t>> bins_;
    std::vector<std::vector<double>> values_;  // per grid point, one value per segment
    std::size_t n_segments_ = 0;
};

}  // namespace ledfano

#endif
