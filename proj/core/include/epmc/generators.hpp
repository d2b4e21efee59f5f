#ifndef EPMC_GENERATORS_HPP
#define EPMC_GENERATORS_HPP

#include <string>
#include <vector>

#include "epmc/oracle.hpp"
#include "epmc/patterns.hpp"

namespace epmc::gen {

/// A benchmark instance: equivalent pattern-annotated and monolithic models,
/// the analysed properties, the repository the annotated model expects, and
/// how to sample admissible valuations for its base parameters.
struct GeneratedBenchmark {
    std::string name;
    std::string annotated_model;
    std::string monolithic_model;
    std::string properties; // one query per line
    std::string repo_spec;
    oracle::SampleSpec samples;
};

/// The running five-operation workflow: three service operations (sequential
/// retry-free, probabilistic, sequential with retry), success/fail outcomes
/// and time/cost rewards. The monolithic model has 15 states and 25
/// transitions.
GeneratedBenchmark running_example();

/// Six-component foreign-exchange trading workflow with unknown operational
/// profile parameters x, y1, y2, z1, z2. Every component uses `pattern` with
/// `services` alternative services.
GeneratedBenchmark fx(patterns::SBSKind pattern, int services);

struct ServerSpec {
    std::string id; // "A".."D"
    patterns::ServerKind kind;
    std::vector<int> placements; // instances of tier 1..3 on this server
};

struct DeploymentSpec {
    std::string id; // "D1".."D8"
    std::vector<ServerSpec> servers;
    int tiers = 3;
};

/// Three-tier deployments D1..D8 (four servers each, mixing BASIC,
/// VIRTUALIZED and VIRTUALIZED_M server types).
DeploymentSpec deployment_table(int d);

/// Staged server-failure chain for a deployment: FAIL when a tier loses all
/// instances, SPF when some tier is left with exactly one.
GeneratedBenchmark multitier_deployment(int d);

} // namespace epmc::gen

#endif
