#include "gausskey/entropy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "gausskey/errors.hpp"
#include "gausskey/quadrature.hpp"

namespace gausskey {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_phi(double d, double var) {
    return -d * d / (2.0 * var) - 0.5 * std::log(2.0 * std::numbers::pi_v<double> * var);
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

// Per-u weights entering one conditional: `den` multiplies the observation
// density, `num` is the bit = 1 part of `den`.
struct ConditionalWeights {
    double obs_var = 1.0;
    std::array<double, 2> log_num{kNegInf, kNegInf};
    std::array<double, 2> log_den{kNegInf, kNegInf};
};

ConditionalWeights make_weights(Party target, Observer obs_kind, int w_a, int w_b,
                                const CellTable& tab) {
    const auto& bit1_t = target == Party::Alice ? tab.bit1_a : tab.bit1_b;
    const auto& level_t = target == Party::Alice ? tab.level_a : tab.level_b;
    const auto& level_o = target == Party::Alice ? tab.level_b : tab.level_a;
    const int w_t = target == Party::Alice ? w_a : w_b;
    const int w_o = target == Party::Alice ? w_b : w_a;

    ConditionalWeights w;
    for (int ui = 0; ui < 2; ++ui) {
        double den = level_t[static_cast<std::size_t>(ui)][static_cast<std::size_t>(w_t)];
        double num = bit1_t[static_cast<std::size_t>(ui)][static_cast<std::size_t>(w_t)];
        if (obs_kind == Observer::Eve) {
            // Eve's conditional carries both parties' reliability likelihoods.
            const double other = level_o[static_cast<std::size_t>(ui)][static_cast<std::size_t>(w_o)];
            den *= other;
            num *= other;
        }
        w.log_den[static_cast<std::size_t>(ui)] = safe_log(den);
        w.log_num[static_cast<std::size_t>(ui)] = safe_log(num);
    }
    if (obs_kind == Observer::Eve) {
        w.obs_var = tab.params.v_e;
    } else {
        w.obs_var = target == Party::Alice ? tab.params.v_b : tab.params.v_a;
    }
    return w;
}

// Returns the posterior P(bit = 1 | obs) and the unnormalized conditional
// density (1/2) sum_u phi(obs - u) * den_u in one pass.
struct PosteriorDensity {
    double posterior;
    double density;
};

PosteriorDensity eval_conditional(const ConditionalWeights& w, double obs, double amplitude) {
    std::array<double, 2> ln{}, ld{};
    double m = kNegInf;
    for (int ui = 0; ui < 2; ++ui) {
        const double u = ui == 0 ? -1.0 : 1.0;
        const double lp = log_phi(obs - u * amplitude, w.obs_var);
        ln[static_cast<std::size_t>(ui)] = lp + w.log_num[static_cast<std::size_t>(ui)];
        ld[static_cast<std::size_t>(ui)] = lp + w.log_den[static_cast<std::size_t>(ui)];
        m = std::max(m, ld[static_cast<std::size_t>(ui)]);
    }
    if (m == kNegInf) return {0.5, 0.0};
    double num = 0.0, den = 0.0;
    for (int ui = 0; ui < 2; ++ui) {
        if (ln[static_cast<std::size_t>(ui)] > kNegInf) num += std::exp(ln[static_cast<std::size_t>(ui)] - m);
        if (ld[static_cast<std::size_t>(ui)] > kNegInf) den += std::exp(ld[static_cast<std::size_t>(ui)] - m);
    }
    const double p = std::clamp(num / den, 0.0, 1.0);
    return {p, 0.5 * den * std::exp(m)};
}

// Conditioning intervals of the observer's signal, split at the constellation
// points so each panel is smooth and unimodal.
std::vector<std::pair<double, double>> observer_intervals(Observer obs_kind, Party target,
                                                          int w_a, int w_b, const CellTable& tab) {
    const double amp = tab.params.amplitude;
    std::vector<std::pair<double, double>> out;
    double lo, hi;
    if (obs_kind == Observer::Eve) {
        hi = observation_truncation(amp, tab.params.v_e);
        lo = -hi;
        out.emplace_back(lo, hi);
    } else {
        const int w_o = target == Party::Alice ? w_b : w_a;
        const double var = target == Party::Alice ? tab.params.v_b : tab.params.v_a;
        auto [blo, bhi] = level_band(w_o, tab.thresholds);
        if (std::isinf(bhi)) bhi = std::max(observation_truncation(amp, var), blo + 8.0 * std::sqrt(var));
        out.emplace_back(blo, bhi);
        out.emplace_back(-bhi, -blo);
    }
    // Insert interior breakpoints at -amp, 0, +amp.
    std::vector<std::pair<double, double>> split;
    for (auto [a, b] : out) {
        std::vector<double> pts{a};
        for (double c : {-amp, 0.0, amp})
            if (c > a && c < b) pts.push_back(c);
        pts.push_back(b);
        std::sort(pts.begin(), pts.end());
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) split.emplace_back(pts[i], pts[i + 1]);
    }
    return split;
}

void check_cell_indices(int w_a, int w_b, const CellTable& tab) {
    if (w_a < 0 || w_a > tab.k() || w_b < 0 || w_b > tab.k())
        throw parameter_error("reliability level out of range");
}

}  // namespace

double observation_truncation(double amplitude, double var) {
    return amplitude + 8.0 * std::sqrt(var);
}

CellTable build_cell_table(const ModelParams& params, const Thresholds& t) {
    validate_params(params);
    CellTable tab;
    tab.params = params;
    tab.thresholds = t;
    const int levels = t.level_count() + 1;
    for (int ui = 0; ui < 2; ++ui) {
        const int u = ui == 0 ? -1 : 1;
        auto& la = tab.level_a[static_cast<std::size_t>(ui)];
        auto& lb = tab.level_b[static_cast<std::size_t>(ui)];
        auto& ba = tab.bit1_a[static_cast<std::size_t>(ui)];
        auto& bb = tab.bit1_b[static_cast<std::size_t>(ui)];
        la.resize(static_cast<std::size_t>(levels));
        lb.resize(static_cast<std::size_t>(levels));
        ba.resize(static_cast<std::size_t>(levels));
        bb.resize(static_cast<std::size_t>(levels));
        for (int w = 0; w < levels; ++w) {
            ba[static_cast<std::size_t>(w)] = cell_prob(u, Cell{1, w}, params.v_a, t, params.amplitude);
            bb[static_cast<std::size_t>(w)] = cell_prob(u, Cell{1, w}, params.v_b, t, params.amplitude);
            la[static_cast<std::size_t>(w)] = ba[static_cast<std::size_t>(w)] +
                                              cell_prob(u, Cell{0, w}, params.v_a, t, params.amplitude);
            lb[static_cast<std::size_t>(w)] = bb[static_cast<std::size_t>(w)] +
                                              cell_prob(u, Cell{0, w}, params.v_b, t, params.amplitude);
        }
    }
    // W_A and W_B are conditionally independent given the satellite symbol.
    tab.joint.resize(static_cast<std::size_t>(levels) * static_cast<std::size_t>(levels));
    for (int wa = 0; wa < levels; ++wa)
        for (int wb = 0; wb < levels; ++wb) {
            double s = 0.0;
            for (int ui = 0; ui < 2; ++ui)
                s += 0.5 * tab.level_a[static_cast<std::size_t>(ui)][static_cast<std::size_t>(wa)] *
                     tab.level_b[static_cast<std::size_t>(ui)][static_cast<std::size_t>(wb)];
            tab.joint[static_cast<std::size_t>(wa) * static_cast<std::size_t>(levels) + static_cast<std::size_t>(wb)] = s;
        }
    return tab;
}

double posterior_bit(Party target, Observer obs_kind, double obs, int w_a, int w_b,
                     const CellTable& tab) {
    check_cell_indices(w_a, w_b, tab);
    if (!std::isfinite(obs)) throw parameter_error("posterior_bit: observation must be finite");
    const ConditionalWeights w = make_weights(target, obs_kind, w_a, w_b, tab);
    if (w.log_den[0] == kNegInf && w.log_den[1] == kNegInf)
        throw undefined_conditional_error("posterior_bit: cell has zero probability under both symbols");
    return eval_conditional(w, obs, tab.params.amplitude).posterior;
}

double conditional_bit_entropy(Party target, Observer obs_kind, int w_a, int w_b,
                               const CellTable& tab) {
    check_cell_indices(w_a, w_b, tab);
    const double weight = tab.joint_at(w_a, w_b);
    if (!(weight > 0.0))
        throw undefined_conditional_error("conditional_bit_entropy: zero-probability cell");
    const ConditionalWeights w = make_weights(target, obs_kind, w_a, w_b, tab);
    const double amp = tab.params.amplitude;
    auto integrand = [&](double obs) {
        const auto [p, q] = eval_conditional(w, obs, amp);
        return q * binary_entropy(p);
    };
    const auto intervals = observer_intervals(obs_kind, target, w_a, w_b, tab);
    const double tol = weight * 1e-10 / static_cast<double>(intervals.size());
    double total = 0.0;
    for (auto [a, b] : intervals) total += integrate(integrand, a, b, tol);
    return std::clamp(total / weight, 0.0, 1.0);
}

CellUse classify_cell(const CellEntropies& h, double* diff_x, double* diff_y) {
    const double dx = h.x_given_z - h.x_given_y;
    const double dy = h.y_given_z - h.y_given_x;
    if (diff_x) *diff_x = dx;
    if (diff_y) *diff_y = dy;
    if (dx >= std::max(0.0, dy)) return CellUse::UseX;
    if (dy > std::max(0.0, dx)) return CellUse::UseY;
    return CellUse::Discard;
}

RateReport soft_rate_lower_bound(const ModelParams& params, const Thresholds& t) {
    const CellTable tab = build_cell_table(params, t);
    const int levels = tab.levels();
    const std::size_t cells = static_cast<std::size_t>(levels) * static_cast<std::size_t>(levels);

    RateReport rep;
    rep.params = params;
    rep.thresholds = t;
    rep.classification.k = tab.k();
    rep.classification.labels.assign(cells, CellUse::Discard);
    rep.classification.h.assign(cells, CellEntropies{});
    rep.weights = tab.joint;
    rep.diff_x.assign(cells, 0.0);
    rep.diff_y.assign(cells, 0.0);
    rep.contributions.assign(cells, 0.0);

    // Cells are independent; workers pull indices and write their own slot,
    // the reduction below runs in deterministic index order.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells) return;
            if (!(rep.weights[i] > 0.0)) continue;  // degenerate cell stays Discard
            const int wa = static_cast<int>(i) / levels;
            const int wb = static_cast<int>(i) % levels;
            CellEntropies h;
            h.x_given_z = conditional_bit_entropy(Party::Alice, Observer::Eve, wa, wb, tab);
            h.x_given_y = conditional_bit_entropy(Party::Alice, Observer::Partner, wa, wb, tab);
            h.y_given_z = conditional_bit_entropy(Party::Bob, Observer::Eve, wa, wb, tab);
            h.y_given_x = conditional_bit_entropy(Party::Bob, Observer::Partner, wa, wb, tab);
            rep.classification.h[i] = h;
        }
    };
    const unsigned nthreads = std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                                                 static_cast<unsigned>(cells));
    std::vector<std::thread> pool;
    for (unsigned ti = 0; ti + 1 < nthreads; ++ti) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (std::size_t i = 0; i < cells; ++i) {
        if (!(rep.weights[i] > 0.0)) continue;
        double dx = 0.0, dy = 0.0;
        rep.classification.labels[i] = classify_cell(rep.classification.h[i], &dx, &dy);
        rep.diff_x[i] = dx;
        rep.diff_y[i] = dy;
        rep.contributions[i] = rep.weights[i] * std::max({0.0, dx, dy});
        rep.soft_rate += rep.contributions[i];
        switch (rep.classification.labels[i]) {
            case CellUse::UseX:
                rep.h_xd_given_yw += rep.weights[i] * rep.classification.h[i].x_given_y;
                rep.h_pair_given_zw += rep.weights[i] * rep.classification.h[i].x_given_z;
                break;
            case CellUse::UseY:
                rep.h_yd_given_xw += rep.weights[i] * rep.classification.h[i].y_given_x;
                rep.h_pair_given_zw += rep.weights[i] * rep.classification.h[i].y_given_z;
                break;
            case CellUse::Discard:
                break;
        }
    }
    return rep;
}

}  // namespace gausskey
