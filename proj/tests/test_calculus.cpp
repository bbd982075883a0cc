#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "chainmail/calculus.hpp"
#include "corpus.hpp"

using namespace chainmail;

namespace {

PlanarGraph full_vplus(std::string text)
{
    PlanarGraph g = parse_graph(text);
    for (auto& v : g.vertices)
        v.vplus = true;
    return g;
}

NonDetectionFact base_fact(const PlanarGraph& g, const std::string& vo)
{
    ProveResult r = prove_non_detection(g, vo, 1);
    REQUIRE(r.trace);
    return fact_from_trace(g, *r.trace);
}

// strengthen every entry to its surgery slope and fill everything
NonDetectionFact fill_all(NonDetectionFact f)
{
    std::vector<std::string> comps;
    for (const auto& e : f.spec.entries)
        comps.push_back(e.component);
    for (const auto& c : comps) {
        const SpecEntry* e = f.spec.find(c);
        if (e->kind != SpecEntry::Strong) {
            Slope s = e->slopes.contains(Slope(-1, 1)) ? Slope(-1, 1) : Slope(1, 1);
            f = strengthen_weak_to_strong(f, c, s);
        }
    }
    for (const auto& c : comps)
        f = apply_fill(f, c, FillDirection::Quotient);
    return f;
}

} // namespace

TEST_CASE("base fact spec for P2")
{
    NonDetectionFact f = base_fact(full_vplus(corpus::p2_text()), "v1");
    REQUIRE(f.spec.entries.size() == 3);
    const SpecEntry* e = f.spec.find("e1");
    REQUIRE(e);
    CHECK(e->kind == SpecEntry::WeakAllConj);
    CHECK(e->slopes == SlopeSet::negatives());
    const SpecEntry* v1 = f.spec.find("v1");
    CHECK(v1->kind == SpecEntry::WeakSingle);
    CHECK(v1->slopes == SlopeSet::positives());
    const SpecEntry* v2 = f.spec.find("v2");
    CHECK(v2->kind == SpecEntry::WeakAllConj);
    CHECK(v2->slopes == SlopeSet::positives());
    f.check();
}

TEST_CASE("base fact entry counts and zero-slope vertices")
{
    NonDetectionFact k4 = base_fact(full_vplus(corpus::k4_text()), "v1");
    CHECK(k4.spec.entries.size() == 10);

    // a vertex outside V+ becomes a strong longitude entry
    PlanarGraph g = parse_graph(corpus::triangle_text());
    for (auto& v : g.vertices)
        v.vplus = v.id != "v3";
    NonDetectionFact f = base_fact(g, "v1");
    const SpecEntry* v3 = f.spec.find("v3");
    REQUIRE(v3);
    CHECK(v3->kind == SpecEntry::Strong);
    CHECK(v3->slope == Slope(0, 1));
}

TEST_CASE("a tampered trace is rejected")
{
    PlanarGraph g = full_vplus(corpus::p2_text());
    ProveResult r = prove_non_detection(g, "v1", 1);
    REQUIRE(r.trace);
    ProofTrace bad = *r.trace;
    bad.cases.pop_back();
    CHECK_THROWS_AS(fact_from_trace(g, bad), Error);
}

TEST_CASE("strengthen weak to strong")
{
    NonDetectionFact f = base_fact(full_vplus(corpus::p2_text()), "v1");
    NonDetectionFact g = strengthen_weak_to_strong(f, "e1", Slope(-1, 1));
    const SpecEntry* e = g.spec.find("e1");
    CHECK(e->kind == SpecEntry::Strong);
    CHECK(e->slope == Slope(-1, 1));
    CHECK(g.presentation_hash == f.presentation_hash);

    CHECK_THROWS_AS(strengthen_weak_to_strong(f, "e1", Slope(1, 1)), Error);  // not negative
    CHECK_THROWS_AS(strengthen_weak_to_strong(f, "v1", Slope(-1, 1)), Error); // not positive
    CHECK_THROWS_AS(strengthen_weak_to_strong(f, "zzz", Slope(1, 1)), Error);
    CHECK_THROWS_AS(strengthen_weak_to_strong(g, "e1", Slope(-1, 1)), Error); // already strong
    NonDetectionFact h = strengthen_weak_to_strong(f, "v1", Slope(1, 1));
    CHECK(h.spec.find("v1")->kind == SpecEntry::Strong);
}

TEST_CASE("fill quotient and unquotient are inverse")
{
    NonDetectionFact f = base_fact(full_vplus(corpus::p2_text()), "v1");
    f = strengthen_weak_to_strong(f, "e1", Slope(-1, 1));
    NonDetectionFact q = apply_fill(f, "e1", FillDirection::Quotient);
    CHECK(q.spec.entries.size() == 2);
    CHECK(q.presentation.relators.size() == f.presentation.relators.size() + 1);
    NonDetectionFact back = apply_fill(q, "e1", FillDirection::Unquotient);
    CHECK(back.presentation.serialize() == f.presentation.serialize());
    CHECK(back.spec.str() == f.spec.str());

    CHECK_THROWS_AS(apply_fill(f, "v1", FillDirection::Quotient), Error);   // weak entry
    CHECK_THROWS_AS(apply_fill(f, "e1", FillDirection::Unquotient), Error); // nothing filled
}

TEST_CASE("fill order does not change the final spec")
{
    NonDetectionFact f = base_fact(full_vplus(corpus::p2_text()), "v1");
    for (const char* c : {"e1", "v1", "v2"})
        f = strengthen_weak_to_strong(f, c, f.spec.find(c)->slopes.contains(Slope(1, 1))
                                                ? Slope(1, 1)
                                                : Slope(-1, 1));
    NonDetectionFact a = apply_fill(apply_fill(f, "e1", FillDirection::Quotient), "v1",
                                    FillDirection::Quotient);
    NonDetectionFact b = apply_fill(apply_fill(f, "v1", FillDirection::Quotient), "e1",
                                    FillDirection::Quotient);
    CHECK(a.spec.str() == b.spec.str());
}

TEST_CASE("quotient unquotient identity over corpus facts")
{
    std::mt19937 rng(41);
    int done = 0;
    while (done < 20) {
        PlanarGraph g = corpus::random_graph(rng, 5);
        for (auto& v : g.vertices)
            v.vplus = true;
        NonDetectionFact f = base_fact(g, "v1");
        std::string comp = f.spec.entries[rng() % f.spec.entries.size()].component;
        Slope s = f.spec.find(comp)->slopes.contains(Slope(1, 1)) ? Slope(1, 1) : Slope(-1, 1);
        f = strengthen_weak_to_strong(f, comp, s);
        NonDetectionFact rt = apply_fill(apply_fill(f, comp, FillDirection::Quotient), comp,
                                         FillDirection::Unquotient);
        CHECK(rt.presentation.serialize() == f.presentation.serialize());
        CHECK(rt.spec.str() == f.spec.str());
        ++done;
    }
}

TEST_CASE("glue preconditions")
{
    NonDetectionFact f1 = base_fact(full_vplus(corpus::p2_text()), "v1");
    NonDetectionFact f2 = base_fact(full_vplus(corpus::p2_text()), "v1");

    // positives and negatives miss 0 and infinity
    CHECK_THROWS_AS(apply_glue(f1, "v1", f2, "e1"), Error);
    // index discipline: c1 must be the weak-single entry
    CHECK_THROWS_AS(apply_glue(f1, "v2", f2, "e1"), Error);
    CHECK_THROWS_AS(apply_glue(f1, "e1", f2, "e1"), Error);
    // c2 must be a weak-all entry
    CHECK_THROWS_AS(apply_glue(f1, "v1", f2, "v1"), Error);

    // widen f1's distinguished entry so the union covers everything
    NonDetectionFact wide = f1;
    for (auto& e : wide.spec.entries)
        if (e.component == "v1")
            e.slopes = SlopeSet::everything();
    NonDetectionFact glued = apply_glue(wide, "v1", f2, "e1");
    CHECK(glued.spec.entries.size() == 4);
    const SpecEntry* single = glued.spec.find("2:v1");
    REQUIRE(single);
    CHECK(single->kind == SpecEntry::WeakSingle);
    CHECK(glued.spec.find("1:v1") == nullptr);
    CHECK(glued.spec.find("2:e1") == nullptr);
    CHECK(glued.spec.find("1:e1")->kind == SpecEntry::WeakAllConj);
    glued.check();

    // f2 must keep a weak-single elsewhere
    NonDetectionFact nosingle = f2;
    for (auto& e : nosingle.spec.entries)
        if (e.kind == SpecEntry::WeakSingle)
            e.kind = SpecEntry::WeakAllConj;
    CHECK_THROWS_AS(apply_glue(wide, "v1", nosingle, "e1"), Error);
}

TEST_CASE("conclusion requires an empty spec and reports homology")
{
    NonDetectionFact f = base_fact(full_vplus(corpus::p2_text()), "v1");
    CHECK_THROWS_AS(conclude_non_LO(f), Error);
    NonDetectionFact filled = fill_all(f);
    Verdict v = conclude_non_LO(filled);
    CHECK(v.h1.finite);
    CHECK(v.h1.order == 3);
    CHECK(v.report.find("|H1| = 3") != std::string::npos);
    CHECK(v.report.find("non-LO") != std::string::npos);
    CHECK(v.report.find("base vo=v1") != std::string::npos);
}

TEST_CASE("provenance replays byte for byte")
{
    std::mt19937 rng(59);
    int done = 0;
    while (done < 8) {
        PlanarGraph g = corpus::random_graph(rng, 4);
        for (auto& v : g.vertices)
            v.vplus = true;
        NonDetectionFact f = fill_all(base_fact(g, "v1"));
        std::string why;
        CHECK(replay_provenance(f, &why));
        CHECK(why.empty());
        ++done;
    }
}

TEST_CASE("a doctored fact fails replay")
{
    NonDetectionFact f = base_fact(full_vplus(corpus::p2_text()), "v1");
    NonDetectionFact wide = f;
    for (auto& e : wide.spec.entries)
        if (e.component == "v1")
            e.slopes = SlopeSet::everything();
    std::string why;
    CHECK(replay_provenance(f, &why));
    CHECK_FALSE(replay_provenance(wide, &why));
    CHECK(!why.empty());
}

TEST_CASE("fact store serialization")
{
    NonDetectionFact f = base_fact(full_vplus(corpus::p2_text()), "v1");
    NonDetectionFact s = strengthen_weak_to_strong(f, "e1", Slope(-1, 1));
    std::string store = write_fact_store({f, s});
    CHECK(store.find("fact " + hex64(f.presentation_hash)) != std::string::npos);
    CHECK(store.find("entry e1 weak-all") != std::string::npos);
    CHECK(store.find("entry v1 weak-single") != std::string::npos);
    CHECK(store.find("entry e1 strong -1/1") != std::string::npos);
    CHECK(store.find("strengthen e1 -1/1") != std::string::npos);
}
