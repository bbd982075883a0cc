#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chainmail/graph.hpp"
#include "chainmail/sign.hpp"

namespace chainmail {

// Sign class of la_e per edge, indexed like g.edges.
using EdgeStateMap = std::vector<SignClass>;

// Edge indices sorted by shortlex id: the digit order of case indices.
std::vector<std::size_t> canonical_edge_order(const PlanarGraph& g);

// Decode a ternary case index (most significant digit = first edge in
// canonical order; RES=0, POS=1, NEG=2) into a state map.
EdgeStateMap state_from_index(const PlanarGraph& g, std::uint64_t index);
std::uint64_t index_from_state(const PlanarGraph& g, const EdgeStateMap& st);

// Directed graph on the vertices induced by a state map: a POS edge points
// tail -> head, a NEG edge head -> tail, a RES edge contributes no arc.
struct TildeGraph {
    struct Arc {
        std::size_t from, to, edge;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<std::size_t>> succ, pred; // arc indices per vertex

    bool isolated(std::size_t v) const { return succ[v].empty() && pred[v].empty(); }
};

TildeGraph build_tilde(const PlanarGraph& g, const EdgeStateMap& st);

// Per-vertex derived statuses: s1 = the incident mu_e^eps are bounded below
// by powers of mu_{v,e}; s23 = also bounded above and mu_{v,e} <= 1.  s1
// needs s23 at every tilde-predecessor (available by topological order); s23
// needs s1 plus v in V+ or v non-isolated.
struct SStatus {
    bool s1 = false, s23 = false;
    std::vector<std::size_t> preds_used; // vertices whose s23 fed this s1
};

// Statuses per vertex (indexed like g.vertices), computed along the given
// topological order; `mirror` flips all arcs (the reversed-order pass of the
// argument).
std::vector<SStatus> status_table(const PlanarGraph& g, const TildeGraph& t,
                                  const std::vector<std::size_t>& topo, bool mirror);

struct ClosureStep {
    std::size_t edge, from, to; // vertex `to` joins V1 through this edge
};

struct CaseOutcome {
    enum Kind { Cycle, Residue, Survived } kind;
    // Cycle: alternating (vertex, edge) pairs; arc i goes from vertex i to
    // vertex i+1 (cyclically) through edge i.
    std::vector<std::pair<std::size_t, std::size_t>> cycle;
    // Residue: the topological order used and the V1 flood fill.
    std::vector<std::size_t> topo;
    std::vector<ClosureStep> closure;
};

// Decide one edge-state case: a directed cycle in the tilde graph refutes it
// through the cycle relation; otherwise both status passes seed V1 = V+ plus
// the non-isolated vertices and the closure must absorb every vertex, making
// every generator residual, which refutes properness.  Requires every
// component of g to contain a V+ vertex.
CaseOutcome analyze_case(const PlanarGraph& g, const EdgeStateMap& st);

struct ProofTrace {
    std::uint64_t graph_hash;
    std::vector<std::string> vplus; // shortlex order
    std::string vo;
    std::string note;
    struct Case {
        std::uint64_t index;
        CaseOutcome outcome;
    };
    std::vector<Case> cases;
};

struct ProveResult {
    std::optional<ProofTrace> trace;          // set when every case contradicts
    std::optional<ProofTrace::Case> survivor; // set when some case survives
};

// Exhaust all 3^|E| edge-state cases (jobs > 1 analyzes them concurrently;
// output is identical for any job count).  v_o must be a V+ vertex and every
// component must contain one.
ProveResult prove_non_detection(const PlanarGraph& g, const std::string& vo,
                                unsigned jobs = 1);

// Independent verification of a trace against the graph: completeness of the
// enumeration, genuine cycles, valid topological orders, status invariants,
// and closure steps that each cross one edge from inside V1 and end with
// V1 = V.  On failure `why` (if given) names the offending case.
bool check_trace(const PlanarGraph& g, const ProofTrace& t, std::string* why = nullptr);

std::string write_trace(const PlanarGraph& g, const ProofTrace& t);
ProofTrace parse_trace(const PlanarGraph& g, const std::string& text);

} // namespace chainmail
