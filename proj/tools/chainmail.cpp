#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "chainmail/calculus.hpp"
#include "chainmail/orderability.hpp"
#include "chainmail/pipeline.hpp"
#include "chainmail/surgery.hpp"

namespace fs = std::filesystem;
using namespace chainmail;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void spit(const fs::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot write " + path.string());
    f << text;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"chainmail link group toolkit"};
    app.require_subcommand(1);

    std::string input, outdir = ".", component, slope_text, input2, component2;
    std::size_t radius = 3, max_nodes = 1000000, conj_len = 2;
    unsigned jobs = 1;
    app.add_option("-o,--outdir", outdir, "output directory");

    auto* c_validate = app.add_subcommand("validate", "check a graph file");
    c_validate->add_option("graph", input)->required();

    auto* c_present = app.add_subcommand("present", "emit the link group presentation");
    c_present->add_option("graph", input)->required();

    auto* c_h1 = app.add_subcommand("h1", "first homology of a presentation");
    c_h1->add_option("presentation", input)->required();

    auto* c_fill = app.add_subcommand("fill", "Dehn fill one peripheral component");
    c_fill->add_option("presentation", input)->required();
    c_fill->add_option("component", component)->required();
    c_fill->add_option("slope", slope_text)->required();

    auto* c_prove = app.add_subcommand("prove", "exhaustive sign-case proof on a graph");
    c_prove->add_option("graph", input)->required();
    c_prove->add_option("-j,--jobs", jobs, "parallel case analysis");

    auto* c_refute = app.add_subcommand("refute", "search for a preorder refutation");
    c_refute->add_option("presentation", input)->required();
    c_refute->add_option("--radius", radius, "word ball radius");
    c_refute->add_option("--max-nodes", max_nodes, "decision node budget");
    c_refute->add_option("--conj-len", conj_len, "conjugator length for constraints");

    auto* c_glue = app.add_subcommand("glue", "splice two presentations");
    c_glue->add_option("presentation1", input)->required();
    c_glue->add_option("component1", component)->required();
    c_glue->add_option("presentation2", input2)->required();
    c_glue->add_option("component2", component2)->required();

    auto* c_pipeline = app.add_subcommand("pipeline", "full run: validate, prove, fill, conclude");
    c_pipeline->add_option("graph", input)->required();
    c_pipeline->add_option("-j,--jobs", jobs, "parallel case analysis");

    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(outdir);
        if (*c_validate) {
            validate_pipeline_input(slurp(input));
            std::cout << "ok\n";
        } else if (*c_present) {
            PlanarGraph g = parse_graph(slurp(input));
            g.check_invariants();
            require_genus_zero(g);
            Presentation p = chainmail_presentation(g);
            spit(fs::path(outdir) / (stem_of(input) + ".pres"), p.serialize());
            std::cout << p.generator_names.size() << " generators, " << p.relators.size()
                      << " relators\n";
        } else if (*c_h1) {
            Presentation p = parse_presentation(slurp(input));
            std::cout << "H1 = " << h1_invariants(p).str() << "\n";
        } else if (*c_fill) {
            Presentation p = parse_presentation(slurp(input));
            Presentation q = dehn_fill(p, component, Slope::parse(slope_text));
            spit(fs::path(outdir) / (stem_of(input) + ".filled.pres"), q.serialize());
            std::cout << "filled " << component << " at " << slope_text << "\n";
        } else if (*c_prove) {
            ValidatedInput in = validate_pipeline_input(slurp(input));
            ProveResult r = prove_non_detection(in.graph, in.vo, jobs);
            if (!r.trace) {
                std::cout << "case " << r.survivor->index << " survived\n";
                return 3;
            }
            std::string why;
            if (!check_trace(in.graph, *r.trace, &why))
                throw Error("trace rejected: " + why);
            spit(fs::path(outdir) / (stem_of(input) + ".trace"), write_trace(in.graph, *r.trace));
            std::cout << r.trace->cases.size() << " cases, all contradicted\n";
        } else if (*c_refute) {
            Presentation p = parse_presentation(slurp(input));
            ConstraintSet cs = constraints_from_filled(p, conj_len);
            RefuteOptions opts;
            opts.max_nodes = max_nodes;
            RefuteResult r = refute(p, cs, radius, opts);
            if (r.kind == RefuteResult::Refuted) {
                std::string why;
                if (!check_refutation(p, cs, *r.certificate, &why))
                    throw Error("certificate rejected: " + why);
                spit(fs::path(outdir) / (stem_of(input) + ".cert"),
                     write_refutation(p, *r.certificate));
                std::cout << "refuted\n";
            } else {
                std::cout << (r.kind == RefuteResult::Budget ? "budget exhausted\n"
                                                             : "unknown\n");
                return 1;
            }
        } else if (*c_glue) {
            Presentation p1 = parse_presentation(slurp(input));
            Presentation p2 = parse_presentation(slurp(input2));
            Presentation q = splice(p1, component, p2, component2);
            spit(fs::path(outdir) / (stem_of(input) + ".glued.pres"), q.serialize());
            std::cout << "glued\n";
        } else if (*c_pipeline) {
            PipelineResult r = run_pipeline(slurp(input), jobs);
            std::string stem = stem_of(input);
            spit(fs::path(outdir) / (stem + ".report"), r.report_text);
            if (r.exit_code == 0) {
                spit(fs::path(outdir) / (stem + ".trace"), r.trace_text);
                spit(fs::path(outdir) / (stem + ".facts"), r.facts_text);
            }
            std::cout << r.report_text;
            return r.exit_code;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
