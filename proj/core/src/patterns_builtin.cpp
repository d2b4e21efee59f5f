#include <cassert>

#include "epmc/patterns.hpp"

namespace epmc::patterns {

namespace {

RationalFunction var(const std::string& name) {
    return RationalFunction::variable(Variable(name));
}

std::string idx(const std::string& base, int i) {
    return base + std::to_string(i);
}

struct ServiceSymbols {
    std::vector<RationalFunction> p, c, t, x, r;
};

ServiceSymbols symbols(SBSKind kind, int n) {
    ServiceSymbols s;
    bool probs = kind == SBSKind::PROB || kind == SBSKind::PROB_R || kind == SBSKind::PROB_R1;
    bool per_service_retry = kind == SBSKind::SEQ_R1 || kind == SBSKind::PROB_R1;
    for (int i = 1; i <= n; ++i) {
        if (probs) s.x.push_back(var(idx("x", i)));
        s.p.push_back(var(idx("p", i)));
        s.c.push_back(var(idx("c", i)));
        s.t.push_back(var(idx("t", i)));
        if (per_service_retry) s.r.push_back(var(idx("r", i)));
    }
    return s;
}

std::vector<std::string> formals_for(SBSKind kind, int n) {
    std::vector<std::string> f;
    bool probs = kind == SBSKind::PROB || kind == SBSKind::PROB_R || kind == SBSKind::PROB_R1;
    bool per_service_retry = kind == SBSKind::SEQ_R1 || kind == SBSKind::PROB_R1;
    bool shared_retry = kind == SBSKind::SEQ_R || kind == SBSKind::PAR_R || kind == SBSKind::PROB_R;
    for (int i = 1; i <= n; ++i) {
        if (probs) f.push_back(idx("x", i));
        f.push_back(idx("p", i));
        f.push_back(idx("c", i));
        f.push_back(idx("t", i));
        if (per_service_retry) f.push_back(idx("r", i));
    }
    if (shared_retry) f.push_back("r");
    return f;
}

struct Triple {
    RationalFunction prob, cost, time;
};

Triple seq_forms(const std::vector<RationalFunction>& p, const std::vector<RationalFunction>& c,
                 const std::vector<RationalFunction>& t) {
    int n = static_cast<int>(p.size());
    RationalFunction fail_all(1);
    for (int i = 0; i < n; ++i) fail_all = fail_all * (1 - p[i]);
    Triple out;
    out.prob = 1 - fail_all;
    out.cost = c[0];
    out.time = t[0];
    RationalFunction prefix(1);
    for (int i = 1; i < n; ++i) {
        prefix = prefix * (1 - p[i - 1]);
        out.cost = out.cost + prefix * c[i];
        out.time = out.time + prefix * t[i];
    }
    return out;
}

Triple par_forms(const std::vector<RationalFunction>& p, const std::vector<RationalFunction>& c,
                 const std::vector<RationalFunction>& t) {
    int n = static_cast<int>(p.size());
    Triple out = seq_forms(p, c, t);
    out.cost = RationalFunction();
    for (int i = 0; i < n; ++i) out.cost = out.cost + c[i];
    // first successful completion under t1 <= ... <= tn, with the last
    // service counted unconditionally
    out.time = (n == 1 ? RationalFunction(1) : p[0]) * t[0];
    RationalFunction prefix(1);
    for (int i = 1; i < n; ++i) {
        prefix = prefix * (1 - p[i - 1]);
        RationalFunction weight = i == n - 1 ? RationalFunction(1) : p[i];
        out.time = out.time + prefix * weight * t[i];
    }
    return out;
}

Triple prob_forms(const ServiceSymbols& s) {
    Triple out;
    for (std::size_t i = 0; i < s.p.size(); ++i) {
        out.prob = out.prob + s.x[i] * s.p[i];
        out.cost = out.cost + s.x[i] * s.c[i];
        out.time = out.time + s.x[i] * s.t[i];
    }
    return out;
}

Triple retried(const Triple& base, const RationalFunction& retry) {
    RationalFunction den = 1 - (1 - base.prob) * retry;
    return {base.prob / den, base.cost / den, base.time / den};
}

// p'_i, c'_i, t'_i of a service that is re-invoked with probability r_i after
// each failure.
void prime(ServiceSymbols& s) {
    for (std::size_t i = 0; i < s.p.size(); ++i) {
        RationalFunction den = 1 - (1 - s.p[i]) * s.r[i];
        s.c[i] = s.c[i] / den;
        s.t[i] = s.t[i] / den;
        s.p[i] = s.p[i] / den;
    }
}

Triple sbs_forms(SBSKind kind, int n) {
    ServiceSymbols s = symbols(kind, n);
    switch (kind) {
    case SBSKind::SEQ: return seq_forms(s.p, s.c, s.t);
    case SBSKind::PAR: return par_forms(s.p, s.c, s.t);
    case SBSKind::PROB: return prob_forms(s);
    case SBSKind::SEQ_R: return retried(seq_forms(s.p, s.c, s.t), var("r"));
    case SBSKind::PAR_R: {
        Triple par = par_forms(s.p, s.c, s.t);
        Triple r = retried(par, var("r"));
        return r;
    }
    case SBSKind::PROB_R: return retried(prob_forms(s), var("r"));
    case SBSKind::SEQ_R1:
        prime(s);
        return seq_forms(s.p, s.c, s.t);
    case SBSKind::PROB_R1:
        prime(s);
        return prob_forms(s);
    }
    assert(false);
    return {};
}

} // namespace

std::vector<std::string> sbs_formals(SBSKind kind, int n) {
    return formals_for(kind, n);
}

PatternRepository builtin_sbs(int n, int max_n) {
    if (n < 1 || n > max_n)
        throw PatternError("service count " + std::to_string(n) + " outside [1," +
                           std::to_string(max_n) + "]");
    PatternRepository repo;
    for (SBSKind kind : {SBSKind::SEQ, SBSKind::PAR, SBSKind::PROB, SBSKind::SEQ_R, SBSKind::SEQ_R1,
                         SBSKind::PAR_R, SBSKind::PROB_R, SBSKind::PROB_R1}) {
        PatternDefinition def;
        def.name = sbs_kind_name(kind);
        def.formals = formals_for(kind, n);
        Triple forms = sbs_forms(kind, n);
        def.properties.emplace_back("prob", std::move(forms.prob));
        def.properties.emplace_back("cost", std::move(forms.cost));
        def.properties.emplace_back("time", std::move(forms.time));
        repo.add(std::move(def));
    }
    repo.provenance = "builtin:sbs?n=" + std::to_string(n);
    return repo;
}

// ---------------------------------------------------------------------------
// Multi-tier server patterns
// ---------------------------------------------------------------------------

namespace {

// Probability that b of the n independent survivors survive, where each
// survives with probability q: the three-way 0 / 1 / 2+ split.
RationalFunction count_class(int b, int n, const RationalFunction& q) {
    RationalFunction zero = (1 - q).pow(n);
    if (b == 0) return zero;
    RationalFunction one = RationalFunction(Rat(static_cast<long>(n))) * q * (1 - q).pow(n - 1);
    if (b == 1) return one;
    return 1 - zero - one;
}

std::string outcome_name(const std::vector<int>& b) {
    std::string s = "p_";
    for (int d : b) s += std::to_string(d);
    return s;
}

bool next_bvec(std::vector<int>& b) {
    for (int i = static_cast<int>(b.size()) - 1; i >= 0; --i) {
        if (b[i] < 2) {
            ++b[i];
            for (std::size_t j = i + 1; j < b.size(); ++j) b[j] = 0;
            return true;
        }
    }
    return false;
}

RationalFunction server_outcome(ServerKind kind, const std::vector<int>& counts,
                                const std::vector<int>& b) {
    RationalFunction p = var("p");
    bool all_zero = true;
    for (int d : b) all_zero = all_zero && d == 0;
    switch (kind) {
    case ServerKind::BASIC: {
        bool full = true;
        for (std::size_t i = 0; i < counts.size(); ++i)
            full = full && ((counts[i] > 1 && b[i] == 2) || (counts[i] == 1 && b[i] == 1));
        if (full) return p;
        if (all_zero) return 1 - p;
        return RationalFunction();
    }
    case ServerKind::VIRTUALIZED: {
        RationalFunction pVM = var("pVM");
        RationalFunction v = p;
        for (std::size_t i = 0; i < counts.size(); ++i)
            v = v * count_class(b[i], counts[i], pVM);
        if (all_zero) v = v + (1 - p);
        return v;
    }
    case ServerKind::VIRTUALIZED_M: {
        RationalFunction pVM = var("pVM");
        RationalFunction pdetect = var("pdetect");
        RationalFunction pmigrate = var("pmigrate");
        RationalFunction r = var("r");
        // probability that one VM is migrated (geometric retries) and then
        // survives
        RationalFunction q = pmigrate * pVM / (1 - (1 - pmigrate) * r);
        RationalFunction up = p;
        RationalFunction migrated = (1 - p) * pdetect;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            up = up * count_class(b[i], counts[i], pVM);
            migrated = migrated * count_class(b[i], counts[i], q);
        }
        RationalFunction v = up + migrated;
        if (all_zero) v = v + (1 - p) * (1 - pdetect);
        return v;
    }
    }
    assert(false);
    return {};
}

} // namespace

PatternRepository builtin_multitier(int m, int n_max) {
    if (m < 1) throw PatternError("tier count must be >= 1");
    if (n_max < 1) throw PatternError("instance bound must be >= 1");
    PatternRepository repo;
    for (ServerKind kind : {ServerKind::BASIC, ServerKind::VIRTUALIZED, ServerKind::VIRTUALIZED_M}) {
        // every hosted-tier shape of length k <= m
        std::vector<std::vector<int>> shapes{{}};
        for (int k = 1; k <= m; ++k) {
            std::vector<std::vector<int>> next;
            for (const auto& shape : shapes) {
                if (static_cast<int>(shape.size()) != k - 1) continue;
                for (int c = 1; c <= n_max; ++c) {
                    auto s = shape;
                    s.push_back(c);
                    next.push_back(s);
                }
            }
            for (auto& s : next) shapes.push_back(std::move(s));
        }
        for (const auto& shape : shapes) {
            if (shape.empty()) continue;
            PatternDefinition def;
            def.name = server_kind_name(kind);
            for (int c : shape) def.name += "_" + std::to_string(c);
            def.formals = server_formals(kind);
            std::vector<int> b(shape.size(), 0);
            do {
                def.properties.emplace_back(outcome_name(b), server_outcome(kind, shape, b));
            } while (next_bvec(b));
            repo.add(std::move(def));
        }
    }
    repo.provenance = "builtin:multitier?m=" + std::to_string(m) + "&nmax=" + std::to_string(n_max);
    return repo;
}

} // namespace epmc::patterns
