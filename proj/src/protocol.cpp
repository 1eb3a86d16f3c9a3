#include "gausskey/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "gausskey/errors.hpp"

namespace gausskey {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Big-endian packing: bits[0] is the most significant, so numeric order on
// packed values equals lexicographic order on sequences.
std::uint64_t pack_bits(std::span<const std::uint8_t> bits) {
    std::uint64_t v = 0;
    for (std::uint8_t b : bits) v = (v << 1) | (b & 1u);
    return v;
}

std::vector<std::uint8_t> unpack_bits(std::uint64_t v, std::size_t len) {
    std::vector<std::uint8_t> bits(len);
    for (std::size_t i = 0; i < len; ++i)
        bits[len - 1 - i] = static_cast<std::uint8_t>((v >> i) & 1u);
    return bits;
}

std::uint64_t mix_base(const SwCode& code, std::size_t len) {
    return splitmix64(code.seed ^ splitmix64(0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(len) + 1)));
}

std::uint64_t bin_of_packed(std::uint64_t packed, std::size_t len, std::uint64_t base,
                            const SwCode& code) {
    if (len < 64 && code.bin_count >= (1ULL << len)) return packed + 1;  // identity disclosure
    const std::uint64_t h = splitmix64(base ^ packed);
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(h) * code.bin_count) >> 64) + 1;
}

std::vector<std::uint8_t> random_bits(std::mt19937_64& rng, std::size_t count) {
    std::vector<std::uint8_t> bits(count);
    std::uint64_t word = 0;
    int left = 0;
    for (auto& b : bits) {
        if (left == 0) {
            word = rng();
            left = 64;
        }
        b = static_cast<std::uint8_t>(word & 1u);
        word >>= 1;
        --left;
    }
    return bits;
}

}  // namespace

Round sample_round(int n, const ModelParams& params, std::mt19937_64& rng) {
    if (n < 1) throw parameter_error("sample_round: n must be >= 1");
    validate_params(params);
    Round r;
    r.u.resize(static_cast<std::size_t>(n));
    r.x.resize(static_cast<std::size_t>(n));
    r.y.resize(static_cast<std::size_t>(n));
    r.z.resize(static_cast<std::size_t>(n));
    std::bernoulli_distribution sign(0.5);
    std::normal_distribution<double> na(0.0, std::sqrt(params.v_a));
    std::normal_distribution<double> nb(0.0, std::sqrt(params.v_b));
    std::normal_distribution<double> ne(0.0, std::sqrt(params.v_e));
    for (int i = 0; i < n; ++i) {
        const double u = sign(rng) ? params.amplitude : -params.amplitude;
        r.u[static_cast<std::size_t>(i)] = u;
        r.x[static_cast<std::size_t>(i)] = u + na(rng);
        r.y[static_cast<std::size_t>(i)] = u + nb(rng);
        r.z[static_cast<std::size_t>(i)] = u + ne(rng);
    }
    return r;
}

Round sample_round(int n, const ModelParams& params, const RngStreams& streams) {
    auto rng = streams.stream("channel-noise");
    return sample_round(n, params, rng);
}

DistillResult distill(std::span<const double> x, std::span<const double> y,
                      const Thresholds& t, const CellClassification& cls) {
    if (x.size() != y.size()) throw parameter_error("distill: sequence lengths differ");
    if (cls.k != t.level_count()) throw parameter_error("distill: classification does not match thresholds");
    DistillResult d;
    const std::size_t n = x.size();
    d.w_a.resize(n);
    d.w_b.resize(n);
    d.x_tilde.resize(n);
    d.y_tilde.resize(n);
    d.keep_x.assign(n, 0);
    d.keep_y.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        d.w_a[i] = reliability_level(x[i], t);
        d.w_b[i] = reliability_level(y[i], t);
        d.x_tilde[i] = static_cast<std::uint8_t>(hard_bit(x[i]));
        d.y_tilde[i] = static_cast<std::uint8_t>(hard_bit(y[i]));
        switch (cls.label(d.w_a[i], d.w_b[i])) {
            case CellUse::UseX:
                d.keep_x[i] = 1;
                d.kept_x_pos.push_back(i);
                d.x_kept.push_back(d.x_tilde[i]);
                break;
            case CellUse::UseY:
                d.keep_y[i] = 1;
                d.kept_y_pos.push_back(i);
                d.y_kept.push_back(d.y_tilde[i]);
                break;
            case CellUse::Discard:
                break;
        }
    }
    return d;
}

std::uint64_t bin_encode(std::span<const std::uint8_t> bits, const SwCode& code) {
    if (code.bin_count < 1) throw parameter_error("bin_encode: bin_count must be >= 1");
    if (bits.size() > 63) throw capacity_error("bin_encode: sequence too long to pack");
    return bin_of_packed(pack_bits(bits), bits.size(), mix_base(code, bits.size()), code);
}

DecodeOutcome decode_in_bin(std::uint64_t bin_index, std::span<const double> p1,
                            const SwCode& code, Decoder mode, double typ_budget_bits) {
    const std::size_t len = p1.size();
    if (len > static_cast<std::size_t>(kMaxKeptLength))
        throw capacity_error("decode_in_bin: kept length exceeds the exhaustive-search bound");
    if (code.bin_count < 1) throw parameter_error("decode_in_bin: bin_count must be >= 1");

    std::vector<double> l1(len), l0(len);
    for (std::size_t i = 0; i < len; ++i) {
        l1[i] = p1[i] > 0.0 ? std::log2(p1[i]) : kNegInf;
        l0[i] = p1[i] < 1.0 ? std::log2(1.0 - p1[i]) : kNegInf;
    }

    const std::uint64_t base = mix_base(code, len);
    const std::uint64_t total = 1ULL << len;
    DecodeOutcome out;
    double best = kNegInf;
    std::uint64_t best_packed = 0;
    std::size_t typ_hits = 0;
    for (std::uint64_t cand = 0; cand < total; ++cand) {
        if (bin_of_packed(cand, len, base, code) != bin_index) continue;
        double score = 0.0;
        for (std::size_t i = 0; i < len; ++i)
            score += ((cand >> (len - 1 - i)) & 1u) ? l1[i] : l0[i];
        if (mode == Decoder::Ml) {
            if (score > best) {  // first maximum wins: lexicographic tie-break
                best = score;
                best_packed = cand;
                out.ok = true;
            }
        } else {
            if (-score <= typ_budget_bits) {
                ++typ_hits;
                best_packed = cand;
            }
        }
    }
    if (mode == Decoder::Typicality) out.ok = typ_hits == 1;
    if (out.ok) out.bits = unpack_bits(best_packed, len);
    return out;
}

std::vector<std::uint8_t> toeplitz_hash(std::span<const std::uint8_t> bits,
                                        std::span<const std::uint8_t> seed, int out_len) {
    if (out_len < 0) throw parameter_error("toeplitz_hash: out_len must be >= 0");
    const std::size_t in = bits.size();
    const std::size_t need =
        in + static_cast<std::size_t>(out_len) == 0 ? 0 : in + static_cast<std::size_t>(out_len) - 1;
    if (seed.size() != need) throw parameter_error("toeplitz_hash: seed length must be input + output - 1");
    std::vector<std::uint8_t> out(static_cast<std::size_t>(out_len), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint8_t acc = 0;
        // Row i of the Toeplitz matrix is seed[i + in - 1 - j] over columns j.
        for (std::size_t j = 0; j < in; ++j) acc ^= static_cast<std::uint8_t>(seed[i + in - 1 - j] & bits[j]);
        out[i] = acc & 1u;
    }
    return out;
}

int sw_message_bits(int n, double entropy_per_symbol, double gamma) {
    if (n < 1) throw parameter_error("sw_message_bits: n must be >= 1");
    if (!(entropy_per_symbol >= 0.0) || !(gamma >= 0.0))
        throw parameter_error("sw_message_bits: entropy and margin must be nonnegative");
    int bits = static_cast<int>(std::ceil(static_cast<double>(n) * (entropy_per_symbol + gamma) - 1e-12));
    if (bits < 0) bits = 0;
    // Lemma-style sizing is strict: the message rate must exceed the entropy.
    while (static_cast<double>(bits) <= static_cast<double>(n) * entropy_per_symbol) ++bits;
    if (bits > 62) throw capacity_error("sw_message_bits: message space exceeds 62 bits");
    return bits;
}

Transcript run_protocol(int n, const ModelParams& params, const Thresholds& t,
                        const RateReport& report, const ProtocolConfig& cfg,
                        std::uint64_t seed) {
    if (n < 1) throw parameter_error("run_protocol: n must be >= 1");
    const RngStreams streams(seed);
    Transcript tr;
    tr.round = sample_round(n, params, streams);
    tr.dist = distill(tr.round.x, tr.round.y, t, report.classification);

    const std::size_t kept_a = tr.dist.x_kept.size();
    const std::size_t kept_b = tr.dist.y_kept.size();
    if (kept_a > static_cast<std::size_t>(kMaxKeptLength) ||
        kept_b > static_cast<std::size_t>(kMaxKeptLength))
        throw capacity_error("run_protocol: kept length exceeds the exhaustive-decoder bound");

    const int bits_a = cfg.full_disclosure ? static_cast<int>(kept_a)
                                           : sw_message_bits(n, report.h_xd_given_yw, cfg.gamma_a);
    const int bits_b = cfg.full_disclosure ? static_cast<int>(kept_b)
                                           : sw_message_bits(n, report.h_yd_given_xw, cfg.gamma_b);
    tr.code_a = SwCode{1ULL << bits_a, streams.derive("bin-seed", 0), cfg.gamma_a};
    tr.code_b = SwCode{1ULL << bits_b, streams.derive("bin-seed", 1), cfg.gamma_b};
    tr.m_a = bin_encode(tr.dist.x_kept, tr.code_a);
    tr.m_b = bin_encode(tr.dist.y_kept, tr.code_b);

    const CellTable tab = build_cell_table(params, t);
    auto decode_side = [&](Party target, const std::vector<std::size_t>& pos, const SwCode& code,
                           std::uint64_t bin, double entropy, double gamma) {
        std::vector<double> p1(pos.size());
        const auto& obs = target == Party::Alice ? tr.round.y : tr.round.x;
        for (std::size_t i = 0; i < pos.size(); ++i)
            p1[i] = posterior_bit(target, Observer::Partner, obs[pos[i]],
                                  tr.dist.w_a[pos[i]], tr.dist.w_b[pos[i]], tab);
        const double budget = static_cast<double>(n) * (entropy + gamma);
        return decode_in_bin(bin, p1, code, cfg.decoder, budget);
    };
    // Bob recovers Alice's kept bits from his own signal; Alice conversely.
    auto dx = decode_side(Party::Alice, tr.dist.kept_x_pos, tr.code_a, tr.m_a,
                          report.h_xd_given_yw, cfg.gamma_a);
    auto dy = decode_side(Party::Bob, tr.dist.kept_y_pos, tr.code_b, tr.m_b,
                          report.h_yd_given_xw, cfg.gamma_b);
    tr.decode_x_ok = dx.ok;
    tr.decode_y_ok = dy.ok;
    tr.x_hat_kept = dx.ok ? std::move(dx.bits) : std::vector<std::uint8_t>(kept_a, 0);
    tr.y_hat_kept = dy.ok ? std::move(dy.bits) : std::vector<std::uint8_t>(kept_b, 0);

    const double key_target = static_cast<double>(n) * report.h_pair_given_zw -
                              static_cast<double>(bits_a + bits_b) -
                              2.0 * cfg.delta * static_cast<double>(n);
    tr.key_bits = static_cast<int>(std::floor(key_target));
    tr.key_available = tr.key_bits > 0;
    if (!tr.key_available) {
        tr.key_bits = std::min(tr.key_bits, 0);
        return tr;  // no extractable key at this n; not a failure
    }

    const std::size_t in_len = kept_a + kept_b;
    auto hash_rng = streams.stream("hash-seed");
    tr.hash_seed = random_bits(hash_rng, in_len + static_cast<std::size_t>(tr.key_bits) - 1);

    auto concat = [](std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
        std::vector<std::uint8_t> v(a.begin(), a.end());
        v.insert(v.end(), b.begin(), b.end());
        return v;
    };
    tr.s = toeplitz_hash(concat(tr.dist.x_kept, tr.y_hat_kept), tr.hash_seed, tr.key_bits);
    tr.s_prime = toeplitz_hash(concat(tr.x_hat_kept, tr.dist.y_kept), tr.hash_seed, tr.key_bits);
    return tr;
}

double entropy_security_floor(double delta, std::uint64_t key_size, bool* clamped) {
    if (!(delta >= 0.0 && delta <= 2.0)) throw parameter_error("entropy_security_floor: delta must be in [0,2]");
    if (key_size < 1) throw parameter_error("entropy_security_floor: key_size must be >= 1");
    const double d = std::min(delta, 1.0);
    if (clamped) *clamped = delta > 1.0;
    const double log_s = std::log2(static_cast<double>(key_size));
    if (d == 0.0) return log_s;
    return (1.0 - d) * log_s - d * std::log2(1.0 / d);
}

SecurityEstimate estimate_security(int n, const ModelParams& params, const Thresholds& t,
                                   const RateReport& report, const SecurityConfig& cfg,
                                   std::uint64_t seed) {
    if (n < 1) throw parameter_error("estimate_security: n must be >= 1");
    if (n > 4) throw capacity_error("estimate_security: exact enumeration is limited to n <= 4");
    if (cfg.out_len < 0 || cfg.out_len > 16)
        throw parameter_error("estimate_security: out_len must be in [0, 16]");
    if (cfg.z_samples < 1 || cfg.f_samples < 1)
        throw parameter_error("estimate_security: sample counts must be >= 1");

    const CellTable tab = build_cell_table(params, t);
    const RngStreams streams(seed);
    const int bits_a = sw_message_bits(n, report.h_xd_given_yw, cfg.gamma_a);
    const int bits_b = sw_message_bits(n, report.h_yd_given_xw, cfg.gamma_b);
    const SwCode code_a{1ULL << bits_a, streams.derive("bin-seed", 0), cfg.gamma_a};
    const SwCode code_b{1ULL << bits_b, streams.derive("bin-seed", 1), cfg.gamma_b};

    SecurityEstimate est;
    est.n = n;
    est.key_size = 1ULL << cfg.out_len;
    est.log2_m = static_cast<double>(bits_a + bits_b);
    est.log2_bins_a = bits_a;
    est.log2_bins_b = bits_b;
    est.alpha = cfg.has_alpha_override ? cfg.alpha_override
                                       : report.h_pair_given_zw - cfg.alpha_delta;
    const double prob_floor = std::exp2(-est.alpha * static_cast<double>(n));

    // One candidate value of the distilled pair at one position.
    struct Branch {
        std::uint8_t xd, yd;
        double p;
    };
    struct Entry {
        std::uint64_t s, m;
        double p;
    };

    if (bits_a + bits_b > 62) throw capacity_error("estimate_security: message space exceeds 62 bits");

    std::vector<double> f_delta_means, f_entropy_means;
    double tail_sum = 0.0;
    const std::size_t hash_len =
        2 * static_cast<std::size_t>(n) + static_cast<std::size_t>(cfg.out_len) - 1;

    std::vector<std::uint8_t> rbits(2 * static_cast<std::size_t>(n));
    std::vector<Entry> entries;
    std::vector<std::array<Branch, 2>> branches(static_cast<std::size_t>(n));
    std::vector<int> branch_count(static_cast<std::size_t>(n));
    std::vector<std::uint8_t> kept_bits;

    for (int fi = 0; fi < cfg.f_samples; ++fi) {
        auto frng = streams.stream("hash-seed", static_cast<std::uint64_t>(fi));
        const auto fseed = random_bits(frng, hash_len);
        double delta_acc = 0.0, ent_acc = 0.0;

        for (int zi = 0; zi < cfg.z_samples; ++zi) {
            auto zrng = streams.stream("security-round",
                                       static_cast<std::uint64_t>(fi) * static_cast<std::uint64_t>(cfg.z_samples) +
                                           static_cast<std::uint64_t>(zi));
            const Round round = sample_round(n, params, zrng);

            // Per position: conditional law of the distilled pair given
            // (z_i, w_a_i, w_b_i). Kept sides leave one free bit, discarded
            // positions are the constant (0, 0).
            std::vector<int> wa(static_cast<std::size_t>(n)), wb(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                const std::size_t si = static_cast<std::size_t>(i);
                wa[si] = reliability_level(round.x[si], t);
                wb[si] = reliability_level(round.y[si], t);
                switch (report.classification.label(wa[si], wb[si])) {
                    case CellUse::UseX: {
                        const double p1 = posterior_bit(Party::Alice, Observer::Eve, round.z[si],
                                                        wa[si], wb[si], tab);
                        branches[si] = {Branch{0, 0, 1.0 - p1}, Branch{1, 0, p1}};
                        branch_count[si] = 2;
                        break;
                    }
                    case CellUse::UseY: {
                        const double p1 = posterior_bit(Party::Bob, Observer::Eve, round.z[si],
                                                        wa[si], wb[si], tab);
                        branches[si] = {Branch{0, 0, 1.0 - p1}, Branch{0, 1, p1}};
                        branch_count[si] = 2;
                        break;
                    }
                    case CellUse::Discard:
                        branches[si] = {Branch{0, 0, 1.0}, Branch{0, 0, 0.0}};
                        branch_count[si] = 1;
                        break;
                }
            }

            entries.clear();
            double tail = 0.0;
            // Walk the product support of the pair sequence.
            std::vector<int> pick(static_cast<std::size_t>(n), 0);
            for (;;) {
                double p = 1.0;
                for (int i = 0; i < n; ++i) {
                    const std::size_t si = static_cast<std::size_t>(i);
                    const Branch& br = branches[si][static_cast<std::size_t>(pick[si])];
                    p *= br.p;
                    rbits[si] = br.xd;
                    rbits[static_cast<std::size_t>(n) + si] = br.yd;
                }
                if (p > 0.0) {
                    if (p > prob_floor) tail += p;
                    kept_bits.clear();
                    for (int i = 0; i < n; ++i)
                        if (report.classification.label(wa[static_cast<std::size_t>(i)],
                                                        wb[static_cast<std::size_t>(i)]) == CellUse::UseX)
                            kept_bits.push_back(rbits[static_cast<std::size_t>(i)]);
                    const std::uint64_t ma = bin_encode(kept_bits, code_a);
                    kept_bits.clear();
                    for (int i = 0; i < n; ++i)
                        if (report.classification.label(wa[static_cast<std::size_t>(i)],
                                                        wb[static_cast<std::size_t>(i)]) == CellUse::UseY)
                            kept_bits.push_back(rbits[static_cast<std::size_t>(n) + static_cast<std::size_t>(i)]);
                    const std::uint64_t mb = bin_encode(kept_bits, code_b);
                    const std::uint64_t m = (ma - 1) * code_b.bin_count + (mb - 1);
                    const std::uint64_t s = pack_bits(toeplitz_hash(rbits, fseed, cfg.out_len));
                    entries.push_back(Entry{s, m, p});
                }
                int carry = n - 1;
                while (carry >= 0 && ++pick[static_cast<std::size_t>(carry)] >=
                                         branch_count[static_cast<std::size_t>(carry)]) {
                    pick[static_cast<std::size_t>(carry)] = 0;
                    --carry;
                }
                if (carry < 0) break;
            }
            tail_sum += tail;

            std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
                return a.m != b.m ? a.m < b.m : a.s < b.s;
            });
            const double inv_s = 1.0 / static_cast<double>(est.key_size);
            double delta = 0.0, ent = 0.0;
            std::size_t i = 0;
            while (i < entries.size()) {
                std::size_t j = i;
                double pm = 0.0;
                while (j < entries.size() && entries[j].m == entries[i].m) pm += entries[j++].p;
                const double q = pm * inv_s;
                std::size_t groups = 0;
                std::size_t r = i;
                while (r < j) {
                    std::size_t r2 = r;
                    double ps = 0.0;
                    while (r2 < j && entries[r2].s == entries[r].s) ps += entries[r2++].p;
                    delta += std::fabs(ps - q);
                    ++groups;
                    if (ps > 0.0) ent -= ps * std::log2(ps / pm);
                    r = r2;
                }
                delta += (static_cast<double>(est.key_size) - static_cast<double>(groups)) * q;
                i = j;
            }
            delta_acc += delta;
            ent_acc += ent;
        }
        f_delta_means.push_back(delta_acc / static_cast<double>(cfg.z_samples));
        f_entropy_means.push_back(ent_acc / static_cast<double>(cfg.z_samples));
    }

    auto mean_stderr = [](const std::vector<double>& v) {
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        if (v.size() < 2) return std::pair{mean, 0.0};
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
        return std::pair{mean, sd / std::sqrt(static_cast<double>(v.size()))};
    };
    std::tie(est.delta_mean, est.delta_stderr) = mean_stderr(f_delta_means);
    std::tie(est.exact_cond_entropy, est.exact_cond_entropy_stderr) = mean_stderr(f_entropy_means);

    const double tail_mean =
        tail_sum / (static_cast<double>(cfg.f_samples) * static_cast<double>(cfg.z_samples));
    est.bound_rhs = std::sqrt(std::exp2(static_cast<double>(cfg.out_len) + est.log2_m -
                                        est.alpha * static_cast<double>(n))) +
                    2.0 * tail_mean;
    est.entropy_floor = entropy_security_floor(std::clamp(est.delta_mean, 0.0, 2.0),
                                               est.key_size, &est.delta_clamped);
    // Delta-method propagation through the floor formula.
    const double d = std::max(std::clamp(est.delta_mean, 0.0, 1.0), 1e-12);
    const double dfloor = -std::log2(static_cast<double>(est.key_size)) + std::log2(d) +
                          1.0 / std::numbers::ln2_v<double>;
    est.floor_stderr = std::fabs(dfloor) * est.delta_stderr;
    return est;
}

}  // namespace gausskey
