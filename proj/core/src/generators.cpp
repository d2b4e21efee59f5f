#include "epmc/generators.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace epmc::gen {

namespace {

using patterns::SBSKind;
using patterns::ServerKind;

RationalFunction var(const std::string& name) {
    return RationalFunction::variable(Variable(name));
}

struct McBuilder {
    ParametricMC mc;
    std::map<std::string, std::map<int, RationalFunction>> reward_acc;

    int add_state(const std::string& name) {
        mc.transitions.emplace_back();
        mc.state_names.push_back(name);
        return mc.num_states() - 1;
    }

    void add(int from, int to, RationalFunction p) {
        if (p.is_zero()) return;
        for (auto& t : mc.transitions[from]) {
            if (t.target == to) {
                t.probability = t.probability + p;
                return;
            }
        }
        mc.transitions[from].push_back({to, std::move(p)});
    }

    void reward(const std::string& structure, int state, RationalFunction value) {
        if (value.is_zero()) return;
        auto& slot = reward_acc[structure][state];
        slot = slot + value;
    }

    void label(const std::string& name, int state) {
        auto [it, inserted] = mc.labels.emplace(name, std::vector<char>());
        it->second.resize(std::max(it->second.size(), static_cast<std::size_t>(state) + 1), 0);
        it->second[state] = 1;
    }

    ParametricMC finish() {
        int n = mc.num_states();
        for (auto& [name, flags] : mc.labels) flags.resize(n, 0);
        for (auto& [name, acc] : reward_acc) {
            std::vector<RationalFunction> rho(n);
            for (auto& [s, v] : acc) rho[s] = std::move(v);
            mc.rewards.emplace(name, std::move(rho));
        }
        std::set<Variable> params;
        for (const auto& row : mc.transitions)
            for (const auto& t : row) t.probability.collect_variables(params);
        for (const auto& [name, rho] : mc.rewards)
            for (const auto& r : rho) r.collect_variables(params);
        mc.parameters.assign(params.begin(), params.end());
        return std::move(mc);
    }
};

// Rename a pattern-local parameter like "p2" or "r" by inserting a component
// tag after its alphabetic prefix: p2 -> p<tag>2, r -> r<tag>.
std::string tag_param(const std::string& name, const std::string& tag) {
    std::size_t i = 0;
    while (i < name.size() && !std::isdigit(static_cast<unsigned char>(name[i]))) ++i;
    return name.substr(0, i) + tag + name.substr(i);
}

std::map<Variable, RationalFunction> tag_substitution(const ParametricMC& mc, const std::string& tag) {
    std::map<Variable, RationalFunction> sub;
    for (const auto& p : mc.parameters) sub.emplace(p, var(tag_param(p.name(), tag)));
    return sub;
}

/// Inline a service pattern into the host chain; pattern-internal succ/fail
/// route to the given host states and parameters get the component tag.
int graft_sbs(McBuilder& b, SBSKind kind, int n, const std::string& tag, int on_success,
              int on_fail) {
    patterns::PatternModel pm = patterns::sbs_pattern_mc(kind, n);
    auto sub = tag_substitution(pm.mc, tag);
    int total = pm.mc.num_states();
    std::vector<int> map(total, -1);
    // success/fail are the two states that move straight to end
    int fail_state = -1;
    for (int s = 0; s < total; ++s) {
        if (s == pm.success_state || s == pm.end_state) continue;
        const auto& row = pm.mc.transitions[s];
        if (row.size() == 1 && row[0].target == pm.end_state) fail_state = s;
    }
    assert(fail_state >= 0);
    for (int s = 0; s < total; ++s) {
        if (s == pm.success_state || s == pm.end_state || s == fail_state) continue;
        map[s] = b.add_state(tag + ":" + pm.mc.state_names[s]);
    }
    map[pm.success_state] = on_success;
    map[fail_state] = on_fail;
    for (int s = 0; s < total; ++s) {
        if (s == pm.success_state || s == pm.end_state || s == fail_state) continue;
        for (const auto& t : pm.mc.transitions[s])
            b.add(map[s], map[t.target], t.probability.substituted(sub));
        for (const auto& [name, rho] : pm.mc.rewards)
            if (!rho[s].is_zero()) b.reward(name, map[s], rho[s].substituted(sub));
    }
    return map[pm.mc.init];
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::vector<std::string> tagged_actuals(SBSKind kind, int n, const std::string& tag) {
    std::vector<std::string> actuals;
    for (const auto& f : patterns::sbs_formals(kind, n)) actuals.push_back(tag_param(f, tag));
    return actuals;
}

void add_simplex_groups(oracle::SampleSpec& spec, SBSKind kind, int n, const std::string& tag) {
    if (kind != SBSKind::PROB && kind != SBSKind::PROB_R && kind != SBSKind::PROB_R1) return;
    std::vector<std::string> group;
    for (int j = 1; j <= n; ++j) group.push_back("x" + tag + std::to_string(j));
    spec.simplex_groups.push_back(std::move(group));
}

} // namespace

// ---------------------------------------------------------------------------
// Running example
// ---------------------------------------------------------------------------

GeneratedBenchmark running_example() {
    GeneratedBenchmark g;
    g.name = "running-example";
    g.repo_spec = "builtin:sbs?n=2";
    g.samples.simplex_groups.push_back({"alpha1", "alpha2"});

    g.annotated_model = R"(dtmc

// pattern-annotated workflow: three operations, each backed by two services

const double prob1; const double prob2; const double prob3;
const double time1; const double time2; const double time3;
const double cost1; const double cost2; const double cost3;
const double x; const double y;

/// 1: SEQ(p11,c11,t11,p12,c12,t12)
/// 2: PROB(alpha1,p21,c21,t21,alpha2,p22,c22,t22)
/// 3: SEQ_R(p31,c31,t31,p32,c32,t32,r)

module Workflow
  z : [1..5] init 1;
  [] z=1 -> prob1*x:(z'=2) + prob1*(1-x):(z'=3) + (1-prob1):(z'=4);
  [] z=2 -> prob2:(z'=5) + (1-prob2):(z'=4);
  [] z=3 -> prob3*y:(z'=1) + prob3*(1-y):(z'=5) + (1-prob3):(z'=4);
  [] z=4 -> 1:(z'=4);
  [] z=5 -> 1:(z'=5);
endmodule

label "op1" = z=1;
label "op2" = z=2;
label "op3" = z=3;
label "fail" = z=4;
label "succ" = z=5;

rewards "time"
  z=1 : time1;
  z=2 : time2;
  z=3 : time3;
endrewards

rewards "cost"
  z=1 : cost1;
  z=2 : cost2;
  z=3 : cost3;
endrewards
)";

    g.monolithic_model = R"(dtmc

// explicit 15-state workflow chain: op1 = two sequential services,
// op2 = probabilistic choice of two services, op3 = sequential with retry

const double p11; const double p12;
const double p21; const double p22;
const double p31; const double p32;
const double c11; const double c12; const double c21; const double c22;
const double c31; const double c32;
const double t11; const double t12; const double t21; const double t22;
const double t31; const double t32;
const double alpha1;
const double r; const double x; const double y;

module Workflow
  s : [0..14] init 0;
  [] s=0 -> p11:(s'=2) + (1-p11):(s'=1);
  [] s=1 -> p12:(s'=2) + (1-p12):(s'=3);
  [] s=2 -> x:(s'=4) + (1-x):(s'=9);
  [] s=3 -> 1:(s'=13);
  [] s=4 -> alpha1:(s'=5) + (1-alpha1):(s'=6);
  [] s=5 -> p21:(s'=7) + (1-p21):(s'=8);
  [] s=6 -> p22:(s'=7) + (1-p22):(s'=8);
  [] s=7 -> 1:(s'=14);
  [] s=8 -> 1:(s'=13);
  [] s=9 -> p31:(s'=11) + (1-p31):(s'=10);
  [] s=10 -> p32:(s'=11) + (1-p32)*r:(s'=9) + (1-p32)*(1-r):(s'=12);
  [] s=11 -> y:(s'=0) + (1-y):(s'=14);
  [] s=12 -> 1:(s'=13);
  [] s=13 -> 1:(s'=13);
  [] s=14 -> 1:(s'=14);
endmodule

label "op1" = s<=3;
label "op2" = s>=4 & s<=8;
label "op3" = s>=9 & s<=12;
label "fail" = s=13;
label "succ" = s=14;

rewards "time"
  s=0 : t11;
  s=1 : t12;
  s=5 : t21;
  s=6 : t22;
  s=9 : t31;
  s=10 : t32;
endrewards

rewards "cost"
  s=0 : c11;
  s=1 : c12;
  s=5 : c21;
  s=6 : c22;
  s=9 : c31;
  s=10 : c32;
endrewards
)";

    g.properties = R"(P=? [ F "succ" ]
P=? [ !"op3" U "fail" ]
R{"time"}=? [ F "succ" | "fail" ]
R{"cost"}=? [ F "succ" | "fail" ]
)";
    return g;
}

// ---------------------------------------------------------------------------
// FX workflow
// ---------------------------------------------------------------------------

namespace {

// Component order: 1 fundamental analysis, 2 market watch, 3 technical
// analysis, 4 alarm, 5 order, 6 notification.
const char* kFxComponents[6] = {"FundamentalAnalysis", "MarketWatch", "TechnicalAnalysis",
                                "Alarm", "Order", "Notification"};

std::string fx_annotated(SBSKind kind, int n) {
    std::ostringstream os;
    os << "dtmc\n\n";
    os << "// six-component FX trading workflow; profile parameters x, y1, y2, z1, z2\n";
    os << "// are the unknown decision probabilities (expert mode, retry analysis,\n";
    os << "// perform transaction, objectives met, re-watch market)\n\n";
    for (int i = 1; i <= 6; ++i)
        os << "const double prob" << i << "; const double time" << i << "; const double cost" << i
           << ";\n";
    os << "const double x; const double y1; const double y2; const double z1; const double z2;\n\n";
    for (int i = 1; i <= 6; ++i) {
        os << "/// " << i << ": " << patterns::sbs_kind_name(kind) << "("
           << join(tagged_actuals(kind, n, std::to_string(i)), ",") << ")\n";
    }
    os << "\nmodule FX\n";
    os << "  w : [0..10] init 0;\n";
    os << "  [] w=0 -> x:(w'=2) + (1-x):(w'=1);\n";
    os << "  [] w=1 -> prob1:(w'=9) + (1-prob1):(w'=8);\n";
    os << "  [] w=9 -> y1:(w'=1) + (1-y1)*y2:(w'=5) + (1-y1)*(1-y2):(w'=7);\n";
    os << "  [] w=2 -> prob2:(w'=3) + (1-prob2):(w'=8);\n";
    os << "  [] w=3 -> prob3:(w'=10) + (1-prob3):(w'=8);\n";
    os << "  [] w=10 -> z1:(w'=5) + (1-z1)*z2:(w'=2) + (1-z1)*(1-z2):(w'=4);\n";
    os << "  [] w=4 -> prob4:(w'=7) + (1-prob4):(w'=8);\n";
    os << "  [] w=5 -> prob5:(w'=6) + (1-prob5):(w'=8);\n";
    os << "  [] w=6 -> prob6:(w'=7) + (1-prob6):(w'=8);\n";
    os << "  [] w=7 -> 1:(w'=7);\n";
    os << "  [] w=8 -> 1:(w'=8);\n";
    os << "endmodule\n\n";
    os << "label \"succ\" = w=7;\n";
    os << "label \"fail\" = w=8;\n\n";
    os << "rewards \"time\"\n";
    for (int i = 1; i <= 6; ++i) os << "  w=" << i << " : time" << i << ";\n";
    os << "endrewards\n\nrewards \"cost\"\n";
    for (int i = 1; i <= 6; ++i) os << "  w=" << i << " : cost" << i << ";\n";
    os << "endrewards\n";
    return os.str();
}

std::string fx_monolithic(SBSKind kind, int n) {
    McBuilder b;
    int start = b.add_state("start");
    int dFA = b.add_state("dFA");
    int dTA = b.add_state("dTA");
    int succ = b.add_state("succ");
    int fail = b.add_state("fail");

    int eNO = graft_sbs(b, kind, n, "6", succ, fail);
    int eOR = graft_sbs(b, kind, n, "5", eNO, fail);
    int eAL = graft_sbs(b, kind, n, "4", succ, fail);
    int eTA = graft_sbs(b, kind, n, "3", dTA, fail);
    int eMW = graft_sbs(b, kind, n, "2", eTA, fail);
    int eFA = graft_sbs(b, kind, n, "1", dFA, fail);

    b.add(start, eMW, var("x"));
    b.add(start, eFA, 1 - var("x"));
    b.add(dFA, eFA, var("y1"));
    b.add(dFA, eOR, (1 - var("y1")) * var("y2"));
    b.add(dFA, succ, (1 - var("y1")) * (1 - var("y2")));
    b.add(dTA, eOR, var("z1"));
    b.add(dTA, eMW, (1 - var("z1")) * var("z2"));
    b.add(dTA, eAL, (1 - var("z1")) * (1 - var("z2")));
    b.add(succ, succ, RationalFunction(1));
    b.add(fail, fail, RationalFunction(1));
    b.label("succ", succ);
    b.label("fail", fail);
    ParametricMC mc = b.finish();
    return to_model_text(mc, "FX");
}

} // namespace

GeneratedBenchmark fx(SBSKind kind, int services) {
    if (services < 1) throw Error("FX generator needs at least one service per component");
    GeneratedBenchmark g;
    g.name = std::string("fx-") + patterns::sbs_kind_name(kind) + "-" + std::to_string(services);
    g.repo_spec = "builtin:sbs?n=" + std::to_string(services);
    g.annotated_model = fx_annotated(kind, services);
    g.monolithic_model = fx_monolithic(kind, services);
    g.properties = R"(P=? [ F "succ" ]
R{"time"}=? [ F "succ" | "fail" ]
R{"cost"}=? [ F "succ" | "fail" ]
)";
    for (int i = 1; i <= 6; ++i) add_simplex_groups(g.samples, kind, services, std::to_string(i));
    return g;
}

// ---------------------------------------------------------------------------
// Multi-tier deployments
// ---------------------------------------------------------------------------

DeploymentSpec deployment_table(int d) {
    auto v = ServerKind::VIRTUALIZED;
    auto vm = ServerKind::VIRTUALIZED_M;
    auto basic = ServerKind::BASIC;
    DeploymentSpec spec;
    spec.id = "D" + std::to_string(d);
    switch (d) {
    case 1:
        spec.servers = {{"A", v, {1, 1, 0}}, {"B", v, {1, 1, 0}}, {"C", basic, {0, 0, 1}},
                        {"D", basic, {0, 0, 1}}};
        break;
    case 2:
        spec.servers = {{"A", vm, {1, 1, 0}}, {"B", vm, {1, 1, 0}}, {"C", basic, {0, 0, 1}},
                        {"D", basic, {0, 0, 1}}};
        break;
    case 3:
        spec.servers = {{"A", v, {2, 1, 0}}, {"B", v, {2, 1, 0}}, {"C", v, {0, 1, 1}},
                        {"D", v, {0, 1, 1}}};
        break;
    case 4:
        spec.servers = {{"A", vm, {2, 1, 0}}, {"B", vm, {2, 1, 0}}, {"C", vm, {0, 1, 1}},
                        {"D", vm, {0, 1, 1}}};
        break;
    case 5:
        spec.servers = {{"A", v, {4, 2, 0}}, {"B", v, {4, 2, 0}}, {"C", v, {0, 2, 2}},
                        {"D", v, {0, 2, 2}}};
        break;
    case 6:
        spec.servers = {{"A", vm, {4, 2, 0}}, {"B", vm, {4, 2, 0}}, {"C", vm, {0, 2, 2}},
                        {"D", vm, {0, 2, 2}}};
        break;
    case 7:
        spec.servers = {{"A", v, {8, 4, 0}}, {"B", v, {8, 4, 0}}, {"C", v, {0, 4, 4}},
                        {"D", v, {0, 4, 4}}};
        break;
    case 8:
        spec.servers = {{"A", vm, {8, 4, 0}}, {"B", vm, {8, 4, 0}}, {"C", vm, {0, 4, 4}},
                        {"D", vm, {0, 4, 4}}};
        break;
    default: throw Error("deployment id must be 1..8");
    }
    return spec;
}

namespace {

std::vector<int> hosted_tiers(const ServerSpec& server) {
    std::vector<int> tiers;
    for (int t = 0; t < static_cast<int>(server.placements.size()); ++t)
        if (server.placements[t] > 0) tiers.push_back(t);
    return tiers;
}

std::vector<int> hosted_counts(const ServerSpec& server) {
    std::vector<int> counts;
    for (int c : server.placements)
        if (c > 0) counts.push_back(c);
    return counts;
}

std::string shape_pattern_name(const ServerSpec& server) {
    std::string name = patterns::server_kind_name(server.kind);
    for (int c : hosted_counts(server)) name += "_" + std::to_string(c);
    return name;
}

// Saturated-count classification of a tier across servers: 0, 1 or 2+.
int saturate(int a, int b) {
    return std::min(2, a + b);
}

struct Aggregate {
    int stage;
    std::vector<int> counts; // per global tier, saturated
    bool operator<(const Aggregate& o) const {
        if (stage != o.stage) return stage < o.stage;
        return counts < o.counts;
    }
};

// Enumerate the b-vectors over a server's hosted tiers together with the
// property name p_<digits>.
std::vector<std::vector<int>> all_bvectors(int k) {
    std::vector<std::vector<int>> out{{}};
    for (int i = 0; i < k; ++i) {
        std::vector<std::vector<int>> next;
        for (const auto& b : out)
            for (int d = 0; d <= 2; ++d) {
                auto nb = b;
                nb.push_back(d);
                next.push_back(std::move(nb));
            }
        out = std::move(next);
    }
    return out;
}

std::string bvec_name(const std::vector<int>& b) {
    std::string s = "p_";
    for (int d : b) s += std::to_string(d);
    return s;
}

// The server's contribution can only be zero for tiers it does not host, and
// is capped by what it actually hosts.
bool bvec_possible(const ServerSpec& server, const std::vector<int>& b) {
    auto counts = hosted_counts(server);
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] == 2 && counts[i] < 2) return false;
        if (b[i] == 1 && counts[i] < 1) return false;
    }
    return true;
}

int classify_terminal(const std::vector<int>& counts) {
    int min_count = *std::min_element(counts.begin(), counts.end());
    return min_count; // 0 = FAIL, 1 = SPF, 2 = OK
}

GeneratedBenchmark multitier_impl(int d) {
    DeploymentSpec spec = deployment_table(d);
    int stages = static_cast<int>(spec.servers.size());
    int tiers = spec.tiers;

    int max_count = 1;
    for (const auto& server : spec.servers)
        for (int c : server.placements) max_count = std::max(max_count, c);

    GeneratedBenchmark g;
    g.name = "multitier-" + spec.id;
    g.repo_spec = "builtin:multitier?m=2&nmax=" + std::to_string(max_count);
    g.properties = "P=? [ F \"FAIL\" ]\nP=? [ F \"SPF\" ]\n";

    // ---- annotated staged chain -------------------------------------------
    {
        McBuilder b;
        std::map<Aggregate, int> index;
        std::vector<Aggregate> order;
        std::function<int(const Aggregate&)> state_of = [&](const Aggregate& a) {
            auto it = index.find(a);
            if (it != index.end()) return it->second;
            std::string name = "stage" + std::to_string(a.stage);
            for (int c : a.counts) name += "_" + std::to_string(c);
            int s = b.add_state(name);
            index.emplace(a, s);
            order.push_back(a);
            return s;
        };
        int fail_state = -1, spf_state = -1, ok_state = -1;
        auto terminal = [&](int cls) -> int {
            int* slot = cls == 0 ? &fail_state : cls == 1 ? &spf_state : &ok_state;
            if (*slot < 0) {
                *slot = b.add_state(cls == 0 ? "FAIL" : cls == 1 ? "SPF" : "OK");
                b.add(*slot, *slot, RationalFunction(1));
                if (cls == 0) b.label("FAIL", *slot);
                if (cls == 1) b.label("SPF", *slot);
            }
            return *slot;
        };

        Aggregate init{0, std::vector<int>(tiers, 0)};
        state_of(init);
        for (std::size_t i = 0; i < order.size(); ++i) {
            Aggregate a = order[i];
            int s = index.at(a);
            const ServerSpec& server = spec.servers[a.stage];
            auto htiers = hosted_tiers(server);
            for (const auto& bvec : all_bvectors(static_cast<int>(htiers.size()))) {
                if (!bvec_possible(server, bvec)) continue; // probability 0
                Aggregate next = a;
                next.stage = a.stage + 1;
                for (std::size_t t = 0; t < htiers.size(); ++t)
                    next.counts[htiers[t]] = saturate(next.counts[htiers[t]], bvec[t]);
                RationalFunction p = var(bvec_name(bvec) + server.id);
                if (next.stage == stages) {
                    b.add(s, terminal(classify_terminal(next.counts)), std::move(p));
                } else {
                    b.add(s, state_of(next), std::move(p));
                }
            }
        }
        ParametricMC mc = b.finish();
        std::vector<PatternAnnotation> annotations;
        for (const auto& server : spec.servers) {
            PatternAnnotation ann;
            ann.id = server.id;
            ann.pattern_name = shape_pattern_name(server);
            for (const auto& f : patterns::server_formals(server.kind))
                ann.actuals.push_back(f + server.id);
            annotations.push_back(std::move(ann));
        }
        g.annotated_model = to_model_text(mc, "Deployment", annotations);
    }

    // ---- monolithic chain with expanded server sub-models -----------------
    {
        McBuilder b;
        std::map<Aggregate, int> index;
        std::vector<Aggregate> order;
        int fail_state = -1, spf_state = -1, ok_state = -1;
        std::function<int(const Aggregate&)> state_of = [&](const Aggregate& a) {
            auto it = index.find(a);
            if (it != index.end()) return it->second;
            std::string name = "stage" + std::to_string(a.stage);
            for (int c : a.counts) name += "_" + std::to_string(c);
            int s = b.add_state(name);
            index.emplace(a, s);
            order.push_back(a);
            return s;
        };
        auto terminal = [&](int cls) -> int {
            int* slot = cls == 0 ? &fail_state : cls == 1 ? &spf_state : &ok_state;
            if (*slot < 0) {
                *slot = b.add_state(cls == 0 ? "FAIL" : cls == 1 ? "SPF" : "OK");
                b.add(*slot, *slot, RationalFunction(1));
                if (cls == 0) b.label("FAIL", *slot);
                if (cls == 1) b.label("SPF", *slot);
            }
            return *slot;
        };

        Aggregate init{0, std::vector<int>(tiers, 0)};
        state_of(init);
        for (std::size_t i = 0; i < order.size(); ++i) {
            Aggregate a = order[i];
            int s = index.at(a);
            const ServerSpec& server = spec.servers[a.stage];
            auto htiers = hosted_tiers(server);
            auto counts = hosted_counts(server);
            patterns::ServerModel sm = patterns::multitier_pattern_mc(server.kind, counts);
            auto sub = tag_substitution(sm.mc, server.id);

            // successor per outcome b-vector
            std::map<int, int> successor_of_state;
            for (const auto& bvec : all_bvectors(static_cast<int>(htiers.size()))) {
                auto outcome_states = sm.mc.states_with_label(bvec_name(bvec));
                if (outcome_states.empty()) continue;
                Aggregate next = a;
                next.stage = a.stage + 1;
                for (std::size_t t = 0; t < htiers.size(); ++t)
                    next.counts[htiers[t]] = saturate(next.counts[htiers[t]], bvec[t]);
                int target = next.stage == stages ? terminal(classify_terminal(next.counts))
                                                  : state_of(next);
                successor_of_state[outcome_states[0]] = target;
            }

            // graft the server chain between this stage and its successors
            int total = sm.mc.num_states();
            auto end_states = sm.mc.states_with_label("end");
            int end = end_states.at(0);
            std::vector<int> map(total, -1);
            for (int q = 0; q < total; ++q) {
                if (q == end) continue;
                auto it = successor_of_state.find(q);
                if (it != successor_of_state.end()) {
                    map[q] = it->second;
                } else if (q == sm.mc.init) {
                    map[q] = s;
                } else {
                    map[q] = b.add_state(server.id + std::to_string(a.stage) + ":" +
                                         sm.mc.state_names[q] + ":" + std::to_string(s));
                }
            }
            for (int q = 0; q < total; ++q) {
                if (q == end || successor_of_state.count(q)) continue;
                for (const auto& t : sm.mc.transitions[q])
                    b.add(map[q], map[t.target], t.probability.substituted(sub));
            }
        }
        ParametricMC mc = b.finish();
        g.monolithic_model = to_model_text(mc, "Deployment");
    }
    return g;
}

} // namespace

GeneratedBenchmark multitier_deployment(int d) {
    return multitier_impl(d);
}

} // namespace epmc::gen
