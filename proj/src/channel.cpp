#include "twrde/channel.hpp"

#include <cmath>

#include "twrde/error.hpp"
#include "twrde/kernels.hpp"
#include "twrde/mathx.hpp"
#include "twrde/quadrature.hpp"

namespace twrde {

namespace {

constexpr double kTwoPi = 6.2831853071795864769253;

double gauss_pdf(double y, double mean, double sigma) {
    double t = (y - mean) / sigma;
    return std::exp(-0.5 * t * t) / (sigma * std::sqrt(kTwoPi));
}

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

ChannelParams::ChannelParams(double s) : sigma(s) {
    if (!(s > 0.0) || !std::isfinite(s))
        throw Error("invalid-argument", "sigma must be positive and finite");
}

double ChannelParams::sample_output(int z, Rng& rng) const {
    double noise = sigma * rng.next_gaussian();
    if (z) return noise;
    return (rng.next_bit() ? 2.0 : -2.0) + noise;
}

double ChannelParams::likelihood(double y, int z) const {
    if (z) return gauss_pdf(y, 0.0, sigma);
    return 0.5 * gauss_pdf(y, -2.0, sigma) + 0.5 * gauss_pdf(y, 2.0, sigma);
}

double ChannelParams::llr(double y) const {
    double c = 2.0 / (sigma * sigma);
    return lncosh(c * y) - c;
}

void ChannelParams::sample_batch(int z, Rng& rng, std::span<double> out) const {
    for (double& y : out) y = sample_output(z, rng);
}

void ChannelParams::llr_batch(std::span<const double> y, std::span<double> out) const {
    kern::active().llr_map(y.data(), out.data(), y.size(), 2.0 / (sigma * sigma));
}

double symmetric_information_rate(double sigma) {
    ChannelParams ch(sigma);
    double lo = -2.0 - 12.0 * sigma, hi = 2.0 + 12.0 * sigma;
    std::vector<double> pts = {lo, -2.0, 0.0, 2.0, hi};

    // Densities must integrate to one; a miss means the grid lost a peak.
    for (int z = 0; z < 2; ++z) {
        double mass = integrate_panels([&](double y) { return ch.likelihood(y, z); }, pts, 1e-10);
        if (std::fabs(mass - 1.0) > 1e-9)
            throw Error("quadrature-failure", "conditional density mass off unity");
    }

    // I(Z;Y) = h(Y) - h(Y|Z); h(Y|Z=1) has the closed Gaussian form and
    // h(Y|Z=0) = h of the mixture, folded into the integral below.
    double h_y = -integrate_panels(
        [&](double y) { return xlog2x(0.5 * ch.likelihood(y, 0) + 0.5 * ch.likelihood(y, 1)); },
        pts, 1e-10);
    double h_mix = -integrate_panels([&](double y) { return xlog2x(ch.likelihood(y, 0)); },
                                     pts, 1e-10);
    double h_gauss = 0.5 * std::log2(kTwoPi * std::exp(1.0) * sigma * sigma);
    double rate = h_y - 0.5 * h_mix - 0.5 * h_gauss;
    return std::clamp(rate, 0.0, 1.0);
}

double sigma_sym(double rate, double tol) {
    if (!(rate > 0.0) || !(rate < 1.0))
        throw Error("invalid-argument", "rate must lie strictly inside (0, 1)");
    double lo = 1e-3, hi = 1e3;
    if (symmetric_information_rate(lo) < rate || symmetric_information_rate(hi) > rate)
        throw Error("bracket-failure", "rate not bracketed by sigma in [1e-3, 1e3]");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double c = symmetric_information_rate(mid);
        if (std::fabs(c - rate) <= tol || hi - lo < 1e-12) return mid;
        (c > rate ? lo : hi) = mid;
    }
    throw Error("bracket-failure", "sigma_sym bisection failed to converge");
}

}  // namespace twrde
