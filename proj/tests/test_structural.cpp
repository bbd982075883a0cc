#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "chainmail/structural.hpp"
#include "corpus.hpp"

using namespace chainmail;

namespace {
PlanarGraph with_vplus(std::string text, const std::vector<std::string>& vplus)
{
    PlanarGraph g = parse_graph(text);
    for (auto& v : g.vertices)
        v.vplus = std::find(vplus.begin(), vplus.end(), v.id) != vplus.end();
    return g;
}

PlanarGraph full_vplus(PlanarGraph g)
{
    for (auto& v : g.vertices)
        v.vplus = true;
    return g;
}
} // namespace

TEST_CASE("ternary case index round trip")
{
    PlanarGraph g = parse_graph(corpus::triangle_text());
    for (std::uint64_t i = 0; i < 27; ++i) {
        EdgeStateMap st = state_from_index(g, i);
        CHECK(index_from_state(g, st) == i);
    }
    // digit order: most significant digit is the first edge in shortlex order
    EdgeStateMap st = state_from_index(g, 9); // 100 ternary
    CHECK(st[g.edge_index("e1")] == SignClass::POS);
    CHECK(st[g.edge_index("e2")] == SignClass::RES);
    CHECK(st[g.edge_index("e3")] == SignClass::RES);
}

TEST_CASE("tilde graph arcs follow edge signs")
{
    PlanarGraph g = parse_graph(corpus::p2_text());
    EdgeStateMap st{SignClass::POS};
    TildeGraph t = build_tilde(g, st);
    REQUIRE(t.arcs.size() == 1);
    CHECK(t.arcs[0].from == g.vertex_index("v1")); // tail to head
    CHECK(t.arcs[0].to == g.vertex_index("v2"));
    st[0] = SignClass::NEG;
    t = build_tilde(g, st);
    CHECK(t.arcs[0].from == g.vertex_index("v2")); // head to tail
    st[0] = SignClass::RES;
    t = build_tilde(g, st);
    CHECK(t.arcs.empty());
    CHECK(t.isolated(0));
}

TEST_CASE("a directed cycle case is refuted by its cycle")
{
    // triangle with all edges positive: v1 -> v2 -> v3 -> v1
    PlanarGraph g = full_vplus(parse_graph(corpus::triangle_text()));
    EdgeStateMap st{SignClass::POS, SignClass::POS, SignClass::POS};
    CaseOutcome o = analyze_case(g, st);
    CHECK(o.kind == CaseOutcome::Cycle);
    CHECK(o.cycle.size() == 3);
}

TEST_CASE("an acyclic case is refuted through residue closure")
{
    PlanarGraph g = full_vplus(parse_graph(corpus::p2_text()));
    for (SignClass s : {SignClass::RES, SignClass::POS, SignClass::NEG}) {
        EdgeStateMap st{s};
        CaseOutcome o = analyze_case(g, st);
        CHECK(o.kind == CaseOutcome::Residue);
        CHECK(o.closure.size() + 2 >= g.vertices.size()); // every vertex absorbed
    }
}

TEST_CASE("the engine requires V+ coverage")
{
    PlanarGraph g = with_vplus(corpus::p2_text(), {});
    CHECK_THROWS_AS(prove_non_detection(g, "v1", 1), Error);
    // vo must itself carry the V+ mark
    PlanarGraph h = with_vplus(corpus::p2_text(), {"v2"});
    CHECK_THROWS_AS(prove_non_detection(h, "v1", 1), Error);
}

TEST_CASE("full enumeration on fixtures with full and minimal V+")
{
    for (const std::string& text : {corpus::p2_text(), corpus::triangle_text(), corpus::k4_text()}) {
        PlanarGraph g = full_vplus(parse_graph(text));
        ProveResult r = prove_non_detection(g, "v1", 1);
        REQUIRE(r.trace);
        CHECK(r.trace->cases.size() ==
              static_cast<std::uint64_t>(std::pow(3.0, static_cast<double>(g.edges.size())) + 0.5));
        CHECK(check_trace(g, *r.trace));

        PlanarGraph m = with_vplus(text, {"v1"});
        ProveResult rm = prove_non_detection(m, "v1", 1);
        REQUIRE(rm.trace);
        CHECK(check_trace(m, *rm.trace));
    }
}

TEST_CASE("random corpus graphs with full V+ always refute every case")
{
    std::mt19937 rng(31);
    for (int t = 0; t < 50; ++t) {
        PlanarGraph g = full_vplus(corpus::random_graph(rng, 6));
        ProveResult r = prove_non_detection(g, "v1", 1);
        REQUIRE(r.trace);
        std::string why;
        CHECK(check_trace(g, *r.trace, &why));
    }
}

TEST_CASE("parallel runs produce identical traces")
{
    PlanarGraph g = full_vplus(parse_graph(corpus::k4_text()));
    ProveResult r1 = prove_non_detection(g, "v1", 1);
    ProveResult r8 = prove_non_detection(g, "v1", 8);
    REQUIRE(r1.trace);
    REQUIRE(r8.trace);
    CHECK(write_trace(g, *r1.trace) == write_trace(g, *r8.trace));
}

TEST_CASE("trace text round trip")
{
    PlanarGraph g = full_vplus(parse_graph(corpus::triangle_text()));
    ProveResult r = prove_non_detection(g, "v1", 1);
    REQUIRE(r.trace);
    std::string text = write_trace(g, *r.trace);
    ProofTrace t2 = parse_trace(g, text);
    CHECK(write_trace(g, t2) == text);
    CHECK(check_trace(g, t2));
}

TEST_CASE("tampered traces are rejected")
{
    PlanarGraph g = full_vplus(parse_graph(corpus::triangle_text()));
    ProveResult r = prove_non_detection(g, "v1", 1);
    REQUIRE(r.trace);

    ProofTrace missing = *r.trace;
    missing.cases.erase(missing.cases.begin() + 5);
    std::string why;
    CHECK_FALSE(check_trace(g, missing, &why));
    CHECK(!why.empty());

    ProofTrace wrong = *r.trace;
    std::swap(wrong.cases[3].outcome, wrong.cases[7].outcome);
    CHECK_FALSE(check_trace(g, wrong));

    // moving vo to another V+ vertex keeps the trace valid (any choice works)
    ProofTrace othervo = *r.trace;
    othervo.vo = "v2";
    CHECK(check_trace(g, othervo));
    // but vo must lie in V+
    PlanarGraph m = parse_graph(corpus::triangle_text());
    for (auto& v : m.vertices)
        v.vplus = v.id == "v1";
    ProveResult rm = prove_non_detection(m, "v1", 1);
    REQUIRE(rm.trace);
    ProofTrace badvo = *rm.trace;
    badvo.vo = "v2";
    CHECK_FALSE(check_trace(m, badvo));

    ProofTrace badhash = *r.trace;
    badhash.graph_hash ^= 1;
    CHECK_FALSE(check_trace(g, badhash));
}
