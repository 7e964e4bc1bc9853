#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "twrde/channel.hpp"
#include "twrde/ensemble.hpp"
#include "twrde/rng.hpp"
#include "twrde/version.hpp"

namespace twrde {

enum class MsgDir : std::uint8_t { var_to_check, check_to_var };

// One conditional message density, carried as a fixed-size bag of LLR samples.
struct Population {
    std::vector<double> samples;
    MsgDir dir;
    std::uint8_t z;  // conditioning value of the attached variable's sum bit
    int pos;         // bundle index (var_to_check) or check index (check_to_var)
};

struct DeConfig {
    std::size_t population_size = 10000;  // samples per population
    int max_iters = 1000;
    std::uint64_t seed = kDefaultSeed;
    double clip_bound = kClipBound;       // nats
    std::size_t ber_samples = 0;          // fresh draws per (z, position); 0 means population_size
    int zero_streak = 10;                 // consecutive hits needed to call a run decodable
    double target_ber = 0.0;              // a max-position BER <= this counts as a hit
    int threads = 1;

    void validate() const;
    std::size_t effective_ber_samples() const {
        return ber_samples ? ber_samples : population_size;
    }
};

struct DeTrace {
    int positions = 1;
    std::vector<std::vector<double>> ber;  // ber[l-1][pos] for iteration l
    bool decodable = false;
    int decoded_at = -1;  // first iteration of the terminal zero streak
    int iters_run = 0;

    double max_ber(int iter) const;  // 1-based
};

void write_csv(std::ostream& os, const DeTrace& trace);

// Channel density driving DE, batch-shaped so alternative conditional laws
// (e.g. plain BPSK-AWGN) run through the identical update path.
class DeChannelModel {
public:
    virtual ~DeChannelModel() = default;
    virtual void sample_obs(int z, Rng& rng, std::span<double> out) const = 0;
    virtual void llr_obs(std::span<const double> y, std::span<double> out) const = 0;
};

class RelayDeChannel final : public DeChannelModel {
public:
    explicit RelayDeChannel(ChannelParams ch) : ch_(ch) {}
    void sample_obs(int z, Rng& rng, std::span<double> out) const override {
        ch_.sample_batch(z, rng, out);
    }
    void llr_obs(std::span<const double> y, std::span<double> out) const override {
        ch_.llr_batch(y, out);
    }

private:
    ChannelParams ch_;
};

// Output-symmetric reference: z = 0 transmits +1, z = 1 transmits -1 over
// AWGN, llr = 2y/sigma^2.  Used by the mirror-symmetry checks.
class BpskDeChannel final : public DeChannelModel {
public:
    explicit BpskDeChannel(double sigma);
    void sample_obs(int z, Rng& rng, std::span<double> out) const override;
    void llr_obs(std::span<const double> y, std::span<double> out) const override;

private:
    double sigma_;
};

// Population-dynamics density evolution.  Two code paths share the sampled
// message representation: a direct one for regular ensembles and a general
// protograph one; on the single-position uncoupled graph their RNG stream
// layout coincides, so traces must agree bit for bit.
class DeEngine {
public:
    DeEngine(const RegularEnsemble& e, const DeConfig& cfg);
    DeEngine(const ScProtograph& p, const DeConfig& cfg);

    void reset();  // all-zero message state, iteration 0, reseeded streams
    void iterate(const DeChannelModel& ch);
    std::vector<double> estimate_ber(const DeChannelModel& ch);

    int iteration() const { return iteration_; }
    int positions() const { return positions_; }
    int num_classes() const { return num_classes_; }
    const Population& var_msg(int cls, int z) const { return var_pops_[2 * cls + z]; }
    const Population& check_msg(int cls, int z) const { return check_pops_[2 * cls + z]; }
    const DeConfig& config() const { return cfg_; }

private:
    struct ClassRef {
        int bundle, check, mult;
    };

    void build_proto(const ScProtograph& p);
    void init_populations();
    void iterate_regular(const DeChannelModel& ch);
    void iterate_proto(const DeChannelModel& ch);
    void update_check_class(int cls, int z);
    void update_var_class(const DeChannelModel& ch, int cls, int z);
    void build_tanh_tables();

    DeConfig cfg_;
    bool regular_;
    int dl_, dr_;
    int positions_;
    int num_classes_;
    int iteration_ = 0;

    // protograph wiring (num_classes_ == 1 with empty lists in regular mode)
    std::vector<ClassRef> classes_;
    std::vector<std::vector<int>> socket_srcs_;  // per class: source class per incoming check socket
    std::vector<std::vector<int>> var_srcs_;     // per class: source class per incoming var socket
    std::vector<std::vector<int>> ber_srcs_;     // per bundle: source class per full-message socket

    std::vector<Population> var_pops_, check_pops_;  // [2*cls + z]
    std::vector<std::vector<double>> ttabs_;         // [cls], layout [z=0 half | z=1 half]
    std::vector<Rng> var_rngs_, check_rngs_;         // [2*cls + z]
    std::vector<Rng> ber_rngs_;                      // [position]
};

DeTrace de_run(DeEngine& engine, const DeChannelModel& ch);
DeTrace de_run(const RegularEnsemble& e, const ChannelParams& ch, const DeConfig& cfg);
DeTrace de_run(const ScProtograph& p, const ChannelParams& ch, const DeConfig& cfg);

}  // namespace twrde
