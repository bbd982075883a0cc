#include "chainmail/pipeline.hpp"

#include <sstream>

namespace chainmail {

ValidatedInput validate_pipeline_input(const std::string& graph_text)
{
    ValidatedInput in;
    in.graph = parse_graph(graph_text);
    in.graph.check_invariants();
    require_genus_zero(in.graph);

    for (const auto& e : in.graph.edges) {
        if (!e.slope)
            throw Error("edge " + e.id + ": missing surgery slope");
        if (e.slope->sign() >= 0)
            throw Error("edge " + e.id + ": slope " + e.slope->str() +
                        " must be negative (edge loops take negative surgeries)");
    }
    for (auto& v : in.graph.vertices) {
        if (!v.slope)
            throw Error("vertex " + v.id + ": missing surgery slope");
        if (v.slope->is_zero()) {
            v.vplus = false;
            in.any_zero_vertex = true;
        } else if (v.slope->sign() > 0) {
            v.vplus = true;
        } else {
            throw Error("vertex " + v.id + ": slope " + v.slope->str() +
                        " must be positive or zero (vertex loops take positive "
                        "or longitudinal surgeries)");
        }
    }
    for (const auto& v : in.graph.vertices)
        if (v.vplus && (in.vo.empty() || shortlex_less(v.id, in.vo)))
            in.vo = v.id;
    auto cover = vplus_coverage(in.graph);
    auto comps = in.graph.components();
    for (std::size_t i = 0; i < cover.size(); ++i)
        if (!cover[i])
            throw Error("component of vertex " + in.graph.vertices[comps[i][0]].id +
                        ": no vertex with a positive slope");
    return in;
}

PipelineResult run_pipeline(const std::string& graph_text, unsigned jobs)
{
    PipelineResult out;
    ValidatedInput in;
    try {
        in = validate_pipeline_input(graph_text);
    } catch (const Error& e) {
        out.exit_code = 2;
        out.error = e.what();
        out.report_text = std::string("validation failed: ") + e.what() + "\n";
        return out;
    }

    try {
        const PlanarGraph& g = in.graph;
        ProveResult pr = prove_non_detection(g, in.vo, jobs);
        if (!pr.trace)
            throw Error("case " + std::to_string(pr.survivor->index) +
                        " survived the sign analysis");
        std::string why;
        if (!check_trace(g, *pr.trace, &why))
            throw Error("trace rejected by its own checker: " + why);
        out.trace_text = write_trace(g, *pr.trace);

        std::vector<NonDetectionFact> facts;
        facts.push_back(fact_from_trace(g, *pr.trace));

        // strengthen every weak boundary to its surgery slope, then fill all
        std::vector<std::pair<std::string, Slope>> targets;
        for (const auto& e : facts.back().spec.entries) {
            Slope s{1, 0};
            bool is_edge = false;
            for (const auto& ge : g.edges)
                if (ge.id == e.component) {
                    s = *ge.slope;
                    is_edge = true;
                }
            if (!is_edge)
                s = *g.vertices[g.vertex_index(e.component)].slope;
            targets.emplace_back(e.component, s);
        }
        for (const auto& [comp, s] : targets)
            if (facts.back().spec.find(comp)->kind != SpecEntry::Strong)
                facts.push_back(strengthen_weak_to_strong(facts.back(), comp, s));
        for (const auto& [comp, s] : targets)
            facts.push_back(apply_fill(facts.back(), comp, FillDirection::Quotient));
        out.facts_text = write_fact_store(facts);

        Verdict v = conclude_non_LO(facts.back());

        std::ostringstream rep;
        rep << "graph: " << g.vertices.size() << " vertices, " << g.edges.size()
            << " edges, distinguished vertex " << in.vo << "\n";
        rep << "cases: " << pr.trace->cases.size() << " edge-sign cases, all contradicted\n";
        rep << "fills:";
        for (const auto& [comp, s] : targets)
            rep << " " << comp << "@" << s.str();
        rep << "\n";
        if (in.any_zero_vertex && !v.h1.finite)
            rep << "note: a vertex slope is zero and H1 of the filled manifold is infinite\n";
        rep << v.report;
        out.report_text = rep.str();
    } catch (const Error& e) {
        out.exit_code = 3;
        out.error = e.what();
        out.report_text = std::string("internal failure: ") + e.what() + "\n";
    }
    return out;
}

} // namespace chainmail
