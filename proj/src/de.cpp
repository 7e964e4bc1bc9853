#include "twrde/de.hpp"

#include <algorithm>
#include <ostream>

#include "twrde/error.hpp"
#include "twrde/format.hpp"
#include "twrde/kernels.hpp"
#include "twrde/parallel.hpp"

namespace twrde {

namespace {

constexpr std::uint64_t kVarStream = 1, kCheckStream = 2, kBerStream = 3;

std::uint64_t stream_id(std::uint64_t kind, std::uint64_t cls, std::uint64_t z) {
    return (kind << 56) | (cls << 8) | z;
}

struct Scratch {
    std::vector<std::uint32_t> idx;
    std::vector<double> acc;
};

Scratch& scratch() {
    static thread_local Scratch s;
    return s;
}

}  // namespace

void DeConfig::validate() const {
    if (population_size < 100 || population_size > (std::size_t(1) << 30))
        throw Error("invalid-argument", "population_size must be in [100, 2^30]");
    if (max_iters < 1) throw Error("invalid-argument", "max_iters must be >= 1");
    if (!(clip_bound > 0.0)) throw Error("invalid-argument", "clip_bound must be positive");
    if (zero_streak < 1) throw Error("invalid-argument", "zero_streak must be >= 1");
    if (!(target_ber >= 0.0)) throw Error("invalid-argument", "target_ber must be >= 0");
    if (threads < 1) throw Error("invalid-argument", "threads must be >= 1");
}

double DeTrace::max_ber(int iter) const {
    const auto& row = ber.at(std::size_t(iter) - 1);
    return *std::max_element(row.begin(), row.end());
}

void write_csv(std::ostream& os, const DeTrace& trace) {
    os << "iteration,position,ber\n";
    for (int l = 1; l <= trace.iters_run; ++l)
        for (int p = 0; p < trace.positions; ++p)
            os << l << ',' << p << ',' << g17(trace.ber[std::size_t(l) - 1][std::size_t(p)])
               << '\n';
}

BpskDeChannel::BpskDeChannel(double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0)) throw Error("invalid-argument", "sigma must be positive");
}

void BpskDeChannel::sample_obs(int z, Rng& rng, std::span<double> out) const {
    double mean = z ? -1.0 : 1.0;
    for (double& y : out) y = mean + sigma_ * rng.next_gaussian();
}

void BpskDeChannel::llr_obs(std::span<const double> y, std::span<double> out) const {
    double c = 2.0 / (sigma_ * sigma_);
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = c * y[i];
}

DeEngine::DeEngine(const RegularEnsemble& e, const DeConfig& cfg)
    : cfg_(cfg), regular_(true), dl_(e.dl), dr_(e.dr) {
    cfg_.validate();
    make_regular(e.dl, e.dr);  // degree validation
    positions_ = 1;
    num_classes_ = 1;
    ber_srcs_ = {std::vector<int>(std::size_t(dl_), 0)};
    init_populations();
    reset();
}

DeEngine::DeEngine(const ScProtograph& p, const DeConfig& cfg) : cfg_(cfg), regular_(false) {
    cfg_.validate();
    build_proto(p);
    init_populations();
    reset();
}

void DeEngine::build_proto(const ScProtograph& p) {
    dl_ = p.dl;
    dr_ = p.dr;
    positions_ = p.L;

    std::vector<std::vector<int>> bundle_cls(std::size_t(p.L));
    std::vector<std::vector<int>> check_cls(std::size_t(p.num_checks()));
    for (int i = 0; i < p.L; ++i)
        for (const auto& nb : p.bundle_checks[std::size_t(i)]) {
            int id = int(classes_.size());
            classes_.push_back({i, nb.index, nb.mult});
            bundle_cls[std::size_t(i)].push_back(id);
            check_cls[std::size_t(nb.index)].push_back(id);
        }
    num_classes_ = int(classes_.size());

    socket_srcs_.resize(std::size_t(num_classes_));
    var_srcs_.resize(std::size_t(num_classes_));
    for (int e = 0; e < num_classes_; ++e) {
        const auto& ce = classes_[std::size_t(e)];
        for (int f : check_cls[std::size_t(ce.check)]) {
            int cnt = p.k * classes_[std::size_t(f)].mult - (f == e ? 1 : 0);
            socket_srcs_[std::size_t(e)].insert(socket_srcs_[std::size_t(e)].end(),
                                                std::size_t(cnt), f);
        }
        for (int f : bundle_cls[std::size_t(ce.bundle)]) {
            int cnt = classes_[std::size_t(f)].mult - (f == e ? 1 : 0);
            var_srcs_[std::size_t(e)].insert(var_srcs_[std::size_t(e)].end(), std::size_t(cnt),
                                             f);
        }
    }
    ber_srcs_.resize(std::size_t(p.L));
    for (int i = 0; i < p.L; ++i)
        for (int f : bundle_cls[std::size_t(i)])
            ber_srcs_[std::size_t(i)].insert(ber_srcs_[std::size_t(i)].end(),
                                             std::size_t(classes_[std::size_t(f)].mult), f);
}

void DeEngine::init_populations() {
    const std::size_t n = cfg_.population_size;
    var_pops_.resize(std::size_t(2 * num_classes_));
    check_pops_.resize(std::size_t(2 * num_classes_));
    ttabs_.assign(std::size_t(num_classes_), std::vector<double>(2 * n, 0.0));
    for (int cls = 0; cls < num_classes_; ++cls) {
        int bundle = regular_ ? 0 : classes_[std::size_t(cls)].bundle;
        int check = regular_ ? 0 : classes_[std::size_t(cls)].check;
        for (int z = 0; z < 2; ++z) {
            auto& vp = var_pops_[std::size_t(2 * cls + z)];
            vp.samples.assign(n, 0.0);
            vp.dir = MsgDir::var_to_check;
            vp.z = std::uint8_t(z);
            vp.pos = bundle;
            auto& cp = check_pops_[std::size_t(2 * cls + z)];
            cp.samples.assign(n, 0.0);
            cp.dir = MsgDir::check_to_var;
            cp.z = std::uint8_t(z);
            cp.pos = check;
        }
    }
}

void DeEngine::reset() {
    for (auto& p : var_pops_) std::fill(p.samples.begin(), p.samples.end(), 0.0);
    for (auto& p : check_pops_) std::fill(p.samples.begin(), p.samples.end(), 0.0);
    var_rngs_.clear();
    check_rngs_.clear();
    ber_rngs_.clear();
    for (int cls = 0; cls < num_classes_; ++cls)
        for (int z = 0; z < 2; ++z) {
            var_rngs_.emplace_back(cfg_.seed, stream_id(kVarStream, std::uint64_t(cls),
                                                        std::uint64_t(z)));
            check_rngs_.emplace_back(cfg_.seed, stream_id(kCheckStream, std::uint64_t(cls),
                                                          std::uint64_t(z)));
        }
    for (int pos = 0; pos < positions_; ++pos)
        ber_rngs_.emplace_back(cfg_.seed, stream_id(kBerStream, std::uint64_t(pos), 0));
    iteration_ = 0;
}

void DeEngine::build_tanh_tables() {
    const std::size_t n = cfg_.population_size;
    parallel_for(std::size_t(num_classes_), cfg_.threads, [&](std::size_t cls) {
        const auto& kt = kern::active();
        kt.tanh_half(var_pops_[2 * cls].samples.data(), ttabs_[cls].data(), n);
        kt.tanh_half(var_pops_[2 * cls + 1].samples.data(), ttabs_[cls].data() + n, n);
    });
}

// Check target population (cls, z): every slot draws the other deg-1 socket
// messages, with socket sum bits uniform over the tuples that xor to z.
void DeEngine::update_check_class(int cls, int z) {
    const std::size_t n = cfg_.population_size;
    auto& rng = check_rngs_[std::size_t(2 * cls + z)];
    const auto& srcs = socket_srcs_[std::size_t(cls)];
    const int nsock = int(srcs.size());
    auto& sc = scratch();
    sc.idx.resize(std::size_t(nsock) * n);
    sc.acc.resize(n);

    for (std::size_t t = 0; t < n; ++t) {
        std::uint64_t w = rng.next_u64();
        int used = 0;
        std::uint32_t acc = std::uint32_t(z);
        for (int s = 0; s + 1 < nsock; ++s) {
            if (used == 64) {
                w = rng.next_u64();
                used = 0;
            }
            std::uint32_t b = std::uint32_t(w >> used) & 1u;
            ++used;
            sc.idx[std::size_t(s) * n + t] = b;
            acc ^= b;
        }
        sc.idx[std::size_t(nsock - 1) * n + t] = acc;
    }
    for (int s = 0; s < nsock; ++s) {
        auto* row = sc.idx.data() + std::size_t(s) * n;
        for (std::size_t t = 0; t < n; ++t)
            row[t] = row[t] * std::uint32_t(n) + rng.next_index(std::uint32_t(n));
    }

    const auto& kt = kern::active();
    std::fill(sc.acc.begin(), sc.acc.end(), 1.0);
    for (int s = 0; s < nsock; ++s)
        kt.gather_mul(ttabs_[std::size_t(srcs[std::size_t(s)])].data(),
                      sc.idx.data() + std::size_t(s) * n, sc.acc.data(), n);
    kt.atanh2_clip(sc.acc.data(), check_pops_[std::size_t(2 * cls + z)].samples.data(), n,
                   cfg_.clip_bound);
}

// Var target population (cls, z): fresh channel observation plus the other
// dl-1 incoming check messages, all conditioned on the same z.
void DeEngine::update_var_class(const DeChannelModel& ch, int cls, int z) {
    const std::size_t n = cfg_.population_size;
    auto& rng = var_rngs_[std::size_t(2 * cls + z)];
    auto& out = var_pops_[std::size_t(2 * cls + z)].samples;
    auto& sc = scratch();
    sc.idx.resize(n);
    sc.acc.resize(n);

    ch.sample_obs(z, rng, {sc.acc.data(), n});
    ch.llr_obs({sc.acc.data(), n}, {out.data(), n});
    const auto& kt = kern::active();
    for (int src : var_srcs_[std::size_t(cls)]) {
        for (std::size_t t = 0; t < n; ++t) sc.idx[t] = rng.next_index(std::uint32_t(n));
        kt.gather_add(check_pops_[std::size_t(2 * src + z)].samples.data(), sc.idx.data(),
                      out.data(), n);
    }
    kt.clip(out.data(), n, cfg_.clip_bound);
}

// Direct regular recursion; stream layout matches the protograph path on the
// uncoupled graph, which the consistency tests exploit.
void DeEngine::iterate_regular(const DeChannelModel& ch) {
    const std::size_t n = cfg_.population_size;
    build_tanh_tables();
    parallel_for(2, cfg_.threads, [&](std::size_t z) {
        auto& rng = check_rngs_[z];
        auto& sc = scratch();
        const int nsock = dr_ - 1;
        sc.idx.resize(std::size_t(nsock) * n);
        sc.acc.resize(n);
        for (std::size_t t = 0; t < n; ++t) {
            std::uint64_t w = rng.next_u64();
            int used = 0;
            std::uint32_t acc = std::uint32_t(z);
            for (int s = 0; s + 1 < nsock; ++s) {
                if (used == 64) {
                    w = rng.next_u64();
                    used = 0;
                }
                std::uint32_t b = std::uint32_t(w >> used) & 1u;
                ++used;
                sc.idx[std::size_t(s) * n + t] = b;
                acc ^= b;
            }
            sc.idx[std::size_t(nsock - 1) * n + t] = acc;
        }
        for (int s = 0; s < nsock; ++s) {
            auto* row = sc.idx.data() + std::size_t(s) * n;
            for (std::size_t t = 0; t < n; ++t)
                row[t] = row[t] * std::uint32_t(n) + rng.next_index(std::uint32_t(n));
        }
        const auto& kt = kern::active();
        std::fill(sc.acc.begin(), sc.acc.end(), 1.0);
        for (int s = 0; s < nsock; ++s)
            kt.gather_mul(ttabs_[0].data(), sc.idx.data() + std::size_t(s) * n, sc.acc.data(),
                          n);
        kt.atanh2_clip(sc.acc.data(), check_pops_[z].samples.data(), n, cfg_.clip_bound);
    });
    parallel_for(2, cfg_.threads, [&](std::size_t z) {
        auto& rng = var_rngs_[z];
        auto& out = var_pops_[z].samples;
        auto& sc = scratch();
        sc.idx.resize(n);
        sc.acc.resize(n);
        ch.sample_obs(int(z), rng, {sc.acc.data(), n});
        ch.llr_obs({sc.acc.data(), n}, {out.data(), n});
        const auto& kt = kern::active();
        for (int s = 0; s + 1 < dl_; ++s) {
            for (std::size_t t = 0; t < n; ++t) sc.idx[t] = rng.next_index(std::uint32_t(n));
            kt.gather_add(check_pops_[z].samples.data(), sc.idx.data(), out.data(), n);
        }
        kt.clip(out.data(), n, cfg_.clip_bound);
    });
    ++iteration_;
}

void DeEngine::iterate_proto(const DeChannelModel& ch) {
    build_tanh_tables();
    parallel_for(std::size_t(2 * num_classes_), cfg_.threads, [&](std::size_t task) {
        update_check_class(int(task >> 1), int(task & 1));
    });
    parallel_for(std::size_t(2 * num_classes_), cfg_.threads, [&](std::size_t task) {
        update_var_class(ch, int(task >> 1), int(task & 1));
    });
    ++iteration_;
}

void DeEngine::iterate(const DeChannelModel& ch) {
    if (regular_)
        iterate_regular(ch);
    else
        iterate_proto(ch);
}

std::vector<double> DeEngine::estimate_ber(const DeChannelModel& ch) {
    const std::size_t n = cfg_.population_size;
    const std::size_t s_count = cfg_.effective_ber_samples();
    std::vector<double> out(std::size_t(positions_), 0.0);
    parallel_for(std::size_t(positions_), cfg_.threads, [&](std::size_t pos) {
        auto& rng = ber_rngs_[pos];
        std::vector<double> y(s_count), m(s_count);
        std::vector<std::uint32_t> idx(s_count);
        const auto& kt = kern::active();
        double err = 0.0;
        for (int z = 0; z < 2; ++z) {
            ch.sample_obs(z, rng, y);
            ch.llr_obs(y, m);
            for (int src : ber_srcs_[pos]) {
                for (std::size_t t = 0; t < s_count; ++t)
                    idx[t] = rng.next_index(std::uint32_t(n));
                kt.gather_add(check_pops_[std::size_t(2 * src + z)].samples.data(), idx.data(),
                              m.data(), s_count);
            }
            std::size_t wrong = 0, ties = 0;
            for (std::size_t t = 0; t < s_count; ++t) {
                wrong += z == 0 ? m[t] < 0.0 : m[t] > 0.0;
                ties += m[t] == 0.0;
            }
            err += (double(wrong) + 0.5 * double(ties)) / double(s_count);
        }
        out[pos] = 0.5 * err;
    });
    return out;
}

DeTrace de_run(DeEngine& engine, const DeChannelModel& ch) {
    const DeConfig& cfg = engine.config();
    engine.reset();
    DeTrace tr;
    tr.positions = engine.positions();
    int streak = 0;
    for (int l = 1; l <= cfg.max_iters; ++l) {
        engine.iterate(ch);
        tr.ber.push_back(engine.estimate_ber(ch));
        tr.iters_run = l;
        const auto& row = tr.ber.back();
        double mx = *std::max_element(row.begin(), row.end());
        streak = mx <= cfg.target_ber ? streak + 1 : 0;
        if (streak >= cfg.zero_streak) break;
    }
    // with a budget shorter than the streak length, a fully zero run counts
    if (streak >= std::min(cfg.zero_streak, cfg.max_iters)) {
        tr.decodable = true;
        tr.decoded_at = tr.iters_run - streak + 1;
    }
    return tr;
}

DeTrace de_run(const RegularEnsemble& e, const ChannelParams& ch, const DeConfig& cfg) {
    DeEngine eng(e, cfg);
    RelayDeChannel model(ch);
    return de_run(eng, model);
}

DeTrace de_run(const ScProtograph& p, const ChannelParams& ch, const DeConfig& cfg) {
    DeEngine eng(p, cfg);
    RelayDeChannel model(ch);
    return de_run(eng, model);
}

}  // namespace twrde
