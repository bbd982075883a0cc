#pragma once

#include <memory>
#include <string>
#include <vector>

#include "chainmail/homology.hpp"
#include "chainmail/presentation.hpp"
#include "chainmail/slope_set.hpp"
#include "chainmail/structural.hpp"

namespace chainmail {

// One boundary entry of a non-detection fact.  WeakAllConj: no proper left
// total preorder weakly detects a slope of `slopes` here with respect to any
// conjugate of the peripheral pair.  WeakSingle: same but only for the plain
// (unconjugated) pair — the distinguished boundary of a hybrid spec.  Strong:
// no proper left total preorder strongly detects `slope` here.
struct SpecEntry {
    enum Kind { WeakAllConj, WeakSingle, Strong } kind = WeakAllConj;
    std::string component;
    SlopeSet slopes;   // weak kinds
    Slope slope{1, 0}; // strong kind

    std::string str() const;
};

// Entries sorted by component id, at most one WeakSingle.
struct BoundarySpec {
    std::vector<SpecEntry> entries;

    const SpecEntry* find(const std::string& component) const;
    std::string str() const; // one "entry ..." line per entry
};

struct NonDetectionFact;

// How a fact was obtained.  A base fact carries the serialized graph and the
// distinguished vertex so the exhaustive case proof can be rerun; a derived
// fact carries its premise facts and the rule arguments.
struct Provenance {
    enum Kind { Base, Strengthen, FillQuotient, FillUnquotient, Glue } kind = Base;
    std::string graph_text, vo;  // Base
    std::string comp, comp2;     // rule arguments
    Slope slope{1, 0};           // Strengthen
    std::vector<std::shared_ptr<const NonDetectionFact>> premises;

    std::string str(int indent = 0) const;
};

// "The group of `presentation` admits no proper left total preorder that
// satisfies every entry of `spec`."  An empty spec therefore says the group
// admits no proper left total preorder at all.
struct NonDetectionFact {
    Presentation presentation;
    std::uint64_t presentation_hash = 0;
    BoundarySpec spec;
    Provenance provenance;

    void check() const; // spec sorted, components resolve, hash consistent
    std::string str() const;
};

// Base fact for the chainmail group of g, from an exhaustive case proof
// (trace must pass check_trace; V+ and v_o are read from it).  Entries:
// every edge loop gets WeakAllConj over the negative slopes, vertex loops
// outside V+ get Strong([0:1]), V+ vertices other than v_o get WeakAllConj
// over the positive slopes, and v_o gets WeakSingle over the positive slopes.
NonDetectionFact fact_from_trace(const PlanarGraph& g, const ProofTrace& trace);

// Replace a weak entry by Strong(s), with s in the entry's slope set: a
// preorder strongly detecting s would weakly detect it with respect to every
// conjugate, contradicting the premise.
NonDetectionFact strengthen_weak_to_strong(const NonDetectionFact& f, const std::string& comp,
                                           Slope s);

enum class FillDirection { Quotient, Unquotient };

// Transfer the fact across a Dehn filling.  Quotient: the entry at comp must
// be Strong(s); the result lives on dehn_fill(presentation, comp, s) with the
// entry dropped.  Unquotient: comp must be the most recent fill of the
// presentation; the filling is undone and the Strong entry restored.  The two
// directions are exact inverses.
NonDetectionFact apply_fill(const NonDetectionFact& f, const std::string& comp, FillDirection dir);

// Glue two facts along boundaries: c1 must be f1's WeakSingle entry with
// slope set D1, c2 a WeakAllConj entry of f2 with slope set D2, D1 and D2
// must jointly cover the projective line, and f2 must carry a WeakSingle at
// some other component (it stays the distinguished entry of the result).
// The result lives on splice(p1, c1, p2, c2) with ids prefixed "1:"/"2:" and
// the glued entries dropped: a preorder on the glued group satisfying the
// remaining entries would restrict to one contradicting f1 or f2.
NonDetectionFact apply_glue(const NonDetectionFact& f1, const std::string& c1,
                            const NonDetectionFact& f2, const std::string& c2);

struct Verdict {
    std::string statement;
    H1Invariants h1;
    std::string report; // statement, homology and provenance in one block
};

// Requires an empty spec: the group admits no proper left total preorder,
// hence no left-orderable quotient, hence is not left-orderable.
Verdict conclude_non_LO(const NonDetectionFact& f);

// Re-executes the provenance from its base facts and compares the rebuilt
// presentation and spec byte-for-byte.  `why` names the first divergence.
bool replay_provenance(const NonDetectionFact& f, std::string* why = nullptr);

// One record per fact, premises before conclusions inside each record.
std::string write_fact_store(const std::vector<NonDetectionFact>& facts);

} // namespace chainmail
