#pragma once

#include <span>

#include "twrde/rng.hpp"

namespace twrde {

// Virtual channel seen by the relay: it observes Y = mu(X_A) + mu(X_B) + W
// with mu(x) = 1 - 2x and W ~ N(0, sigma^2), and decodes the modular sum
// Z = X_A xor X_B.  Under independent uniform inputs:
//   Y | Z=1  ~  N(0, sigma^2)
//   Y | Z=0  ~  half-half mixture of N(-2, sigma^2) and N(+2, sigma^2)
struct ChannelParams {
    double sigma;

    explicit ChannelParams(double s);

    // One observation y drawn from the law of Y given Z = z.
    double sample_output(int z, Rng& rng) const;

    // Density of Y = y given Z = z.
    double likelihood(double y, int z) const;

    // ln L[y|0]/L[y|1] = lncosh(2y/sigma^2) - 2/sigma^2; even in y, minimum
    // at llr(0) = -2/sigma^2, positive iff z = 0 is the likelier hypothesis.
    double llr(double y) const;

    void sample_batch(int z, Rng& rng, std::span<double> out) const;
    void llr_batch(std::span<const double> y, std::span<double> out) const;
};

// Largest rate at which the relay can recover Z reliably under the IID input
// assumption: I(Z; Y) in bits per channel use, clamped to [0, 1].
double symmetric_information_rate(double sigma);

// Inverse of the above: the noise level at which I(Z; Y) equals `rate`.
double sigma_sym(double rate, double tol = 1e-6);

}  // namespace twrde
