#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "gausskey/entropy.hpp"
#include "gausskey/model.hpp"
#include "gausskey/quantizer.hpp"
#include "gausskey/rng.hpp"

namespace gausskey {

// One channel use repeated n times: satellite symbols and the three
// observations.
struct Round {
    std::vector<double> u, x, y, z;
};

Round sample_round(int n, const ModelParams& params, std::mt19937_64& rng);
Round sample_round(int n, const ModelParams& params, const RngStreams& streams);

// Reliability exchange plus per-position keep/discard decisions.
struct DistillResult {
    std::vector<int> w_a, w_b;
    std::vector<std::uint8_t> x_tilde, y_tilde;
    std::vector<std::uint8_t> keep_x, keep_y;      // cell in A resp. B
    std::vector<std::size_t> kept_x_pos, kept_y_pos;
    std::vector<std::uint8_t> x_kept, y_kept;
};

DistillResult distill(std::span<const double> x, std::span<const double> y,
                      const Thresholds& t, const CellClassification& cls);

// Random-binning code: a kept sequence is disclosed as its bin index.
// Once the bin space covers every sequence the assignment is the identity,
// which makes full disclosure exact.
struct SwCode {
    std::uint64_t bin_count = 1;
    std::uint64_t seed = 0;
    double gamma = 0.0;  // rate slack above the conditional entropy, bits/symbol
};

inline constexpr int kMaxKeptLength = 24;

// Deterministic, 1-based bin index.
std::uint64_t bin_encode(std::span<const std::uint8_t> bits, const SwCode& code);

enum class Decoder { Ml, Typicality };

struct DecodeOutcome {
    bool ok = false;
    std::vector<std::uint8_t> bits;
};

// Exhaustive in-bin decoding. p1[i] = P(bit_i = 1 | side information at i).
// Ml always returns the in-bin posterior argmax (lexicographic tie-break);
// Typicality succeeds iff exactly one in-bin sequence stays within
// `typ_budget_bits` of total surprisal.
DecodeOutcome decode_in_bin(std::uint64_t bin_index, std::span<const double> p1,
                            const SwCode& code, Decoder mode, double typ_budget_bits = 0.0);

// Binary Toeplitz matrix (built from `seed`, which must hold
// bits.size() + out_len - 1 entries) applied to `bits` over GF(2).
std::vector<std::uint8_t> toeplitz_hash(std::span<const std::uint8_t> bits,
                                        std::span<const std::uint8_t> seed, int out_len);

struct ProtocolConfig {
    double gamma_a = 0.3;         // reconciliation margins, bits per symbol
    double gamma_b = 0.3;
    double delta = 0.05;          // key-size slack, bits per symbol
    bool full_disclosure = false; // reveal kept bits verbatim
    Decoder decoder = Decoder::Ml;
};

// Everything a run discloses or produces. The public communication is
// (w_a, w_b, m_a, m_b, hash_seed).
struct Transcript {
    Round round;
    DistillResult dist;
    SwCode code_a, code_b;
    std::uint64_t m_a = 1, m_b = 1;
    std::vector<std::uint8_t> x_hat_kept, y_hat_kept;  // decoded estimates
    bool decode_x_ok = true, decode_y_ok = true;
    std::vector<std::uint8_t> hash_seed;
    int key_bits = 0;
    bool key_available = false;  // false: no extractable key at this n
    std::vector<std::uint8_t> s, s_prime;
};

// Full protocol pass: sample, distill, reconcile via bin coding, hash.
// `report` supplies the entropies and classification for sizing.
Transcript run_protocol(int n, const ModelParams& params, const Thresholds& t,
                        const RateReport& report, const ProtocolConfig& cfg,
                        std::uint64_t seed);

struct SecurityConfig {
    int out_len = 1;         // key bits, |S| = 2^out_len
    int z_samples = 1000;    // eavesdropper draws per hash function
    int f_samples = 100;     // hash-function draws
    double gamma_a = 0.3;
    double gamma_b = 0.3;
    double alpha_delta = 0.2;  // alpha = H(pair | Z, W) - alpha_delta
    bool has_alpha_override = false;
    double alpha_override = 0.0;
};

struct SecurityEstimate {
    int n = 0;
    double alpha = 0.0;
    double delta_mean = 0.0;   // Monte-Carlo estimate of E_f[distance to ideal]
    double delta_stderr = 0.0;
    double bound_rhs = 0.0;    // leftover-hash bound right-hand side
    double entropy_floor = 0.0;
    double floor_stderr = 0.0;
    double exact_cond_entropy = 0.0;  // averaged exact H(S | z, w, m, f)
    double exact_cond_entropy_stderr = 0.0;
    std::uint64_t key_size = 1;
    double log2_m = 0.0;
    bool delta_clamped = false;
    int log2_bins_a = 0, log2_bins_b = 0;
};

// Tiny-n exact verification of the leftover-hash security bound: per sampled
// (z, w) the joint law of key and public messages is enumerated exactly, the
// distance to an independent uniform key is averaged over hash draws, and the
// bound right-hand side and entropy floor are reported alongside.
SecurityEstimate estimate_security(int n, const ModelParams& params, const Thresholds& t,
                                   const RateReport& report, const SecurityConfig& cfg,
                                   std::uint64_t seed);

// (1 - delta) * log2|S| - delta * log2(1/delta); delta clamped into [0,1].
double entropy_security_floor(double delta, std::uint64_t key_size, bool* clamped = nullptr);

// Message sizing: smallest bit count whose rate strictly exceeds
// entropy + gamma per symbol.
int sw_message_bits(int n, double entropy_per_symbol, double gamma);

}  // namespace gausskey
