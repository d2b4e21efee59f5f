#include <algorithm>
#include <cmath>
#include <sstream>

#include "epmc/engine.hpp"
#include "epmc/patterns.hpp"

namespace epmc::patterns {

namespace {

struct SBSShape {
    SBSKind kind;
    int n;
};

std::optional<SBSShape> recognize_sbs(const PatternDefinition& def) {
    auto kind = sbs_kind_from(def.name);
    if (!kind) return std::nullopt;
    for (int n = 1; n <= 16; ++n) {
        auto formals = sbs_formals(*kind, n);
        if (formals.size() < def.formals.size()) continue;
        if (formals == def.formals) return SBSShape{*kind, n};
        if (formals.size() > def.formals.size()) break;
    }
    return std::nullopt;
}

struct ServerShape {
    ServerKind kind;
    std::vector<int> counts;
};

std::optional<ServerShape> recognize_server(const PatternDefinition& def) {
    for (ServerKind kind : {ServerKind::VIRTUALIZED_M, ServerKind::VIRTUALIZED, ServerKind::BASIC}) {
        std::string prefix = std::string(server_kind_name(kind)) + "_";
        if (def.name.rfind(prefix, 0) != 0) continue;
        std::vector<int> counts;
        std::string rest = def.name.substr(prefix.size());
        std::istringstream is(rest);
        std::string tok;
        bool ok = !rest.empty();
        while (std::getline(is, tok, '_')) {
            if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
                ok = false;
                break;
            }
            counts.push_back(std::stoi(tok));
        }
        if (!ok || counts.empty()) return std::nullopt;
        if (def.formals != server_formals(kind)) return std::nullopt;
        return ServerShape{kind, std::move(counts)};
    }
    return std::nullopt;
}

// The PROB family's last branch probability is determined by the others.
std::map<Variable, RationalFunction> simplex_substitution(SBSKind kind, int n) {
    std::map<Variable, RationalFunction> sub;
    if (kind != SBSKind::PROB && kind != SBSKind::PROB_R && kind != SBSKind::PROB_R1) return sub;
    RationalFunction rest(1);
    for (int i = 1; i < n; ++i)
        rest = rest - RationalFunction::variable(Variable("x" + std::to_string(i)));
    sub.emplace(Variable("x" + std::to_string(n)), std::move(rest));
    return sub;
}

Valuation sample_sbs_valuation(SBSKind kind, int n, std::mt19937_64& rng, double lo, double hi) {
    Valuation v;
    std::uniform_real_distribution<double> uni(lo, hi);
    auto dyadic = [&] { return Rat(static_cast<long>(uni(rng) * (1 << 20)), 1L << 20); };
    bool par = kind == SBSKind::PAR || kind == SBSKind::PAR_R;
    std::vector<Rat> times;
    for (int i = 1; i <= n; ++i) times.push_back(dyadic());
    if (par) std::sort(times.begin(), times.end()); // t1 <= ... <= tn obligation
    for (int i = 1; i <= n; ++i) {
        v.set("p" + std::to_string(i), dyadic());
        v.set("c" + std::to_string(i), dyadic());
        v.set("t" + std::to_string(i), times[static_cast<std::size_t>(i) - 1]);
    }
    if (kind == SBSKind::SEQ_R || kind == SBSKind::PAR_R || kind == SBSKind::PROB_R)
        v.set("r", dyadic());
    if (kind == SBSKind::SEQ_R1 || kind == SBSKind::PROB_R1)
        for (int i = 1; i <= n; ++i) v.set("r" + std::to_string(i), dyadic());
    if (kind == SBSKind::PROB || kind == SBSKind::PROB_R || kind == SBSKind::PROB_R1) {
        std::uniform_int_distribution<long> wd(1, 1 << 16);
        std::vector<Rat> w;
        Rat total(0);
        for (int i = 0; i < n; ++i) {
            w.emplace_back(wd(rng));
            total += w.back();
        }
        for (int i = 1; i < n; ++i) v.set("x" + std::to_string(i), w[i - 1] / total);
        // x_n is substituted away in both the closed form and the model
    }
    return v;
}

Valuation sample_server_valuation(ServerKind kind, std::mt19937_64& rng, double lo, double hi) {
    Valuation v;
    std::uniform_real_distribution<double> uni(lo, hi);
    auto dyadic = [&] { return Rat(static_cast<long>(uni(rng) * (1 << 20)), 1L << 20); };
    for (const auto& f : server_formals(kind)) v.set(f, dyadic());
    return v;
}

} // namespace

VerifyResult verify_repository(const PatternRepository& repo, const VerifyOptions& opts) {
    VerifyResult res;
    std::mt19937_64 rng(opts.seed);
    auto fail = [&](const std::string& line) {
        res.pass = false;
        res.failures.push_back(line);
        res.lines.push_back("FAIL " + line);
    };
    auto ok = [&](const std::string& line) { res.lines.push_back("ok   " + line); };

    for (const auto& def : repo.definitions) {
        if (auto sbs = recognize_sbs(def)) {
            PatternModel pm = sbs_pattern_mc(sbs->kind, sbs->n);
            auto sub = simplex_substitution(sbs->kind, sbs->n);
            RationalFunction engine_value[3] = {
                engine::reach_probability(pm.mc, {pm.success_state}),
                engine::reach_reward(pm.mc, "cost", {pm.end_state}).value,
                engine::reach_reward(pm.mc, "time", {pm.end_state}).value,
            };
            const char* names[3] = {"prob", "cost", "time"};
            for (int k = 0; k < 3; ++k) {
                const RationalFunction* expr = def.property(names[k]);
                if (!expr) {
                    fail(def.name + "." + names[k] + ": property missing");
                    continue;
                }
                RationalFunction expected = sub.empty() ? *expr : expr->substituted(sub);
                if (expected != engine_value[k]) {
                    fail(def.name + "." + names[k] + ": closed form differs from pattern semantics");
                    continue;
                }
                double max_diff = 0;
                for (int s = 0; s < opts.samples; ++s) {
                    Valuation v = sample_sbs_valuation(sbs->kind, sbs->n, rng, 0.01, 0.99);
                    double sym = expected.evaluate_double(v);
                    double num = k == 0 ? oracle::numeric_check(oracle::specialize(pm.mc, v),
                                                                parse_property("P=? [ F \"succ\" ]"))
                                        : oracle::numeric_check(
                                              oracle::specialize(pm.mc, v),
                                              parse_property(std::string("R{\"") + names[k] +
                                                             "\"}=? [ F \"end\" ]"));
                    max_diff = std::max(max_diff, std::abs(sym - num));
                }
                if (max_diff > opts.tol) {
                    fail(def.name + "." + names[k] + ": numeric mismatch, max diff " +
                         std::to_string(max_diff));
                } else {
                    ok(def.name + "." + names[k] + " (n=" + std::to_string(sbs->n) + ", " +
                       std::to_string(opts.samples) + " samples)");
                }
            }
            continue;
        }
        if (auto server = recognize_server(def)) {
            ServerModel sm = multitier_pattern_mc(server->kind, server->counts);
            RationalFunction total;
            bool all_ok = true;
            for (const auto& [prop, expr] : def.properties) {
                total = total + expr;
                auto target = sm.mc.states_with_label(prop);
                RationalFunction computed = engine::reach_probability(sm.mc, target);
                if (computed != expr) {
                    fail(def.name + "." + prop + ": closed form differs from pattern semantics");
                    all_ok = false;
                    continue;
                }
                double max_diff = 0;
                for (int s = 0; s < opts.samples; ++s) {
                    Valuation v = sample_server_valuation(server->kind, rng, 0.01, 0.99);
                    double sym = expr.evaluate_double(v);
                    double num = oracle::numeric_check(oracle::specialize(sm.mc, v),
                                                       parse_property("P=? [ F \"" + prop + "\" ]"));
                    max_diff = std::max(max_diff, std::abs(sym - num));
                }
                if (max_diff > opts.tol) {
                    fail(def.name + "." + prop + ": numeric mismatch, max diff " +
                         std::to_string(max_diff));
                    all_ok = false;
                }
            }
            if (!total.is_one()) {
                fail(def.name + ": outcome probabilities do not sum to 1 (got " + total.str() + ")");
            } else if (all_ok) {
                ok(def.name + " (" + std::to_string(def.properties.size()) +
                   " outcomes, sum-to-1 holds, " + std::to_string(opts.samples) + " samples each)");
            }
            continue;
        }
        fail(def.name + ": pattern shape not recognized; no verification model available");
    }
    return res;
}

} // namespace epmc::patterns
