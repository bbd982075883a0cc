#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chainmail/pipeline.hpp"
#include "corpus.hpp"

using namespace chainmail;

TEST_CASE("validation accepts alternating slopes and picks the lowest vo")
{
    ValidatedInput in = validate_pipeline_input(corpus::p2_text("1/1", "-1/1"));
    CHECK(in.vo == "v1");
    CHECK(in.graph.vertices[0].vplus);
    CHECK(in.graph.vertices[1].vplus);
    CHECK_FALSE(in.any_zero_vertex);
}

TEST_CASE("zero vertex slopes leave V+ and set the flag")
{
    std::string text = "vertex v1 slope 0/1\nvertex v2 slope 1/1\nedge e1 v1 v2 slope -1/1\n"
                       "rotation v1: e1.t\nrotation v2: e1.h\n";
    ValidatedInput in = validate_pipeline_input(text);
    CHECK(in.any_zero_vertex);
    CHECK_FALSE(in.graph.vertices[0].vplus);
    CHECK(in.vo == "v2");
}

TEST_CASE("validation failures name the offending component")
{
    // positive edge slope
    PipelineResult r = run_pipeline(corpus::triangle_text(true) == "" ? "" : [] {
        std::string t = corpus::triangle_text(true);
        std::size_t at = t.find("edge e1 v1 v2 slope -1/1");
        t.replace(at, std::string("edge e1 v1 v2 slope -1/1").size(),
                  "edge e1 v1 v2 slope 1/1");
        return t;
    }());
    CHECK(r.exit_code == 2);
    CHECK(r.error.find("e1") != std::string::npos);
    CHECK(r.error.find("negative") != std::string::npos);

    // negative vertex slope
    std::string neg = corpus::p2_text("-1/1", "-1/1");
    PipelineResult rn = run_pipeline(neg);
    CHECK(rn.exit_code == 2);
    CHECK(rn.error.find("v1") != std::string::npos);

    // missing slopes entirely
    CHECK(run_pipeline(corpus::p2_text()).exit_code == 2);

    // no positive-slope vertex anywhere
    std::string zeros = "vertex v1 slope 0/1\n";
    PipelineResult rz = run_pipeline(zeros);
    CHECK(rz.exit_code == 2);

    // unparseable input
    CHECK(run_pipeline("nonsense\n").exit_code == 2);
}

TEST_CASE("P2 pipeline run end to end")
{
    PipelineResult r = run_pipeline(corpus::p2_text("1/1", "-1/1"));
    REQUIRE(r.exit_code == 0);
    CHECK(r.report_text.find("|H1| = 3") != std::string::npos);
    CHECK(r.report_text.find("verdict non-LO") != std::string::npos);
    CHECK(!r.trace_text.empty());
    CHECK(!r.facts_text.empty());

    // the emitted trace is independently checkable
    ValidatedInput in = validate_pipeline_input(corpus::p2_text("1/1", "-1/1"));
    ProofTrace t = parse_trace(in.graph, r.trace_text);
    CHECK(check_trace(in.graph, t));
}

TEST_CASE("triangle pipeline run")
{
    PipelineResult r = run_pipeline(corpus::triangle_text(true));
    REQUIRE(r.exit_code == 0);
    CHECK(r.report_text.find("verdict non-LO") != std::string::npos);
    CHECK(r.report_text.find("27 edge-sign cases") != std::string::npos);
}

TEST_CASE("outputs are byte identical across parallelism degrees")
{
    for (const std::string& text : {corpus::p2_text("1/1", "-1/1"), corpus::triangle_text(true)}) {
        PipelineResult a = run_pipeline(text, 1);
        PipelineResult b = run_pipeline(text, 8);
        CHECK(a.exit_code == b.exit_code);
        CHECK(a.trace_text == b.trace_text);
        CHECK(a.facts_text == b.facts_text);
        CHECK(a.report_text == b.report_text);
        PipelineResult c = run_pipeline(text, 1);
        CHECK(a.report_text == c.report_text);
    }
}

TEST_CASE("zero vertex slope pipeline reports honest homology")
{
    std::string text = "vertex v1 slope 0/1\nvertex v2 slope 1/1\nedge e1 v1 v2 slope -1/1\n"
                       "rotation v1: e1.t\nrotation v2: e1.h\n";
    PipelineResult r = run_pipeline(text);
    REQUIRE(r.exit_code == 0);
    CHECK(r.report_text.find("|H1| = 1") != std::string::npos);
    // the computed group is finite, so no infinite-homology note appears
    CHECK(r.report_text.find("infinite") == std::string::npos);

    // an isolated zero-slope vertex is its own component and fails coverage
    PipelineResult iso = run_pipeline("vertex v1 slope 0/1\nvertex v2 slope 1/1\n");
    CHECK(iso.exit_code == 2);
}
