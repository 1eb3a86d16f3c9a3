#include "gausskey/report.hpp"

namespace gausskey {

using nlohmann::json;

const char* to_string(CellUse use) {
    switch (use) {
        case CellUse::UseX: return "use_x";
        case CellUse::UseY: return "use_y";
        case CellUse::Discard: return "discard";
    }
    return "discard";
}

const char* to_string(ConversionMode mode) {
    return mode == ConversionMode::Exact ? "exact" : "paper-erfc";
}

json to_json(const ModelParams& p) {
    return json{{"v_a", p.v_a}, {"v_b", p.v_b}, {"v_e", p.v_e}, {"amplitude", p.amplitude}};
}

json to_json(const RateReport& r) {
    json cells = json::array();
    const int levels = r.classification.levels();
    for (int wa = 0; wa < levels; ++wa)
        for (int wb = 0; wb < levels; ++wb) {
            const std::size_t i = r.classification.idx(wa, wb);
            const auto& h = r.classification.h[i];
            cells.push_back(json{{"w_a", wa},
                                 {"w_b", wb},
                                 {"weight", r.weights[i]},
                                 {"h_x_given_z", h.x_given_z},
                                 {"h_x_given_y", h.x_given_y},
                                 {"h_y_given_z", h.y_given_z},
                                 {"h_y_given_x", h.y_given_x},
                                 {"diff_x", r.diff_x[i]},
                                 {"diff_y", r.diff_y[i]},
                                 {"label", to_string(r.classification.labels[i])},
                                 {"contribution", r.contributions[i]}});
        }
    return json{{"params", to_json(r.params)},
                {"thresholds", r.thresholds.a},
                {"soft_rate", r.soft_rate},
                {"h_xd_given_yw", r.h_xd_given_yw},
                {"h_yd_given_xw", r.h_yd_given_xw},
                {"h_pair_given_zw", r.h_pair_given_zw},
                {"cells", cells}};
}

json to_json(const BaselineReport& r) {
    json per_n = json::array();
    for (const auto& [n, rate] : r.rate_per_n) per_n.push_back(json{{"n", n}, {"rate", rate}});
    return json{{"rate_per_n", per_n}, {"best_n", r.best_n}, {"best_rate", r.best_rate}};
}

json to_json(const Transcript& t) {
    return json{{"u", t.round.u},
                {"x", t.round.x},
                {"y", t.round.y},
                {"z", t.round.z},
                {"w_a", t.dist.w_a},
                {"w_b", t.dist.w_b},
                {"x_tilde", t.dist.x_tilde},
                {"y_tilde", t.dist.y_tilde},
                {"keep_x", t.dist.keep_x},
                {"keep_y", t.dist.keep_y},
                {"x_kept", t.dist.x_kept},
                {"y_kept", t.dist.y_kept},
                {"log2_bins_a", std::log2(static_cast<double>(t.code_a.bin_count))},
                {"log2_bins_b", std::log2(static_cast<double>(t.code_b.bin_count))},
                {"m_a", t.m_a},
                {"m_b", t.m_b},
                {"x_hat_kept", t.x_hat_kept},
                {"y_hat_kept", t.y_hat_kept},
                {"decode_x_ok", t.decode_x_ok},
                {"decode_y_ok", t.decode_y_ok},
                {"hash_seed", t.hash_seed},
                {"key_bits", t.key_bits},
                {"key_available", t.key_available},
                {"s", t.s},
                {"s_prime", t.s_prime}};
}

json to_json(const SecurityEstimate& e) {
    return json{{"n", e.n},
                {"alpha", e.alpha},
                {"delta_mean", e.delta_mean},
                {"delta_stderr", e.delta_stderr},
                {"bound_rhs", e.bound_rhs},
                {"entropy_floor", e.entropy_floor},
                {"floor_stderr", e.floor_stderr},
                {"exact_cond_entropy", e.exact_cond_entropy},
                {"exact_cond_entropy_stderr", e.exact_cond_entropy_stderr},
                {"key_size", e.key_size},
                {"log2_m", e.log2_m},
                {"log2_bins_a", e.log2_bins_a},
                {"log2_bins_b", e.log2_bins_b},
                {"delta_clamped", e.delta_clamped}};
}

}  // namespace gausskey
