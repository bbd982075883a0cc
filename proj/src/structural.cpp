#include "chainmail/structural.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <thread>

namespace chainmail {

std::vector<std::size_t> canonical_edge_order(const PlanarGraph& g)
{
    std::vector<std::size_t> order(g.edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return shortlex_less(g.edges[a].id, g.edges[b].id);
    });
    return order;
}

static std::uint64_t pow3(std::size_t e)
{
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (p > UINT64_MAX / 3)
            throw Error("too many edges for exhaustive case analysis");
        p *= 3;
    }
    return p;
}

EdgeStateMap state_from_index(const PlanarGraph& g, std::uint64_t index)
{
    auto order = canonical_edge_order(g);
    EdgeStateMap st(g.edges.size(), SignClass::RES);
    for (std::size_t i = order.size(); i-- > 0;) {
        st[order[i]] = static_cast<SignClass>(index % 3);
        index /= 3;
    }
    if (index != 0)
        throw Error("case index out of range");
    return st;
}

std::uint64_t index_from_state(const PlanarGraph& g, const EdgeStateMap& st)
{
    if (st.size() != g.edges.size())
        throw Error("state map size mismatch");
    std::uint64_t index = 0;
    for (std::size_t e : canonical_edge_order(g))
        index = index * 3 + static_cast<std::uint64_t>(st[e]);
    return index;
}

TildeGraph build_tilde(const PlanarGraph& g, const EdgeStateMap& st)
{
    if (st.size() != g.edges.size())
        throw Error("state map size mismatch");
    TildeGraph t;
    t.succ.resize(g.vertices.size());
    t.pred.resize(g.vertices.size());
    for (std::size_t e : canonical_edge_order(g)) {
        if (st[e] == SignClass::RES)
            continue;
        TildeGraph::Arc a;
        a.edge = e;
        if (st[e] == SignClass::POS) {
            a.from = g.edges[e].tail;
            a.to = g.edges[e].head;
        } else {
            a.from = g.edges[e].head;
            a.to = g.edges[e].tail;
        }
        t.succ[a.from].push_back(t.arcs.size());
        t.pred[a.to].push_back(t.arcs.size());
        t.arcs.push_back(a);
    }
    return t;
}

namespace {

std::vector<std::size_t> shortlex_vertex_ranks(const PlanarGraph& g)
{
    std::vector<std::size_t> order(g.vertices.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return shortlex_less(g.vertices[a].id, g.vertices[b].id);
    });
    std::vector<std::size_t> rank(g.vertices.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        rank[order[i]] = i;
    return rank;
}

// A directed cycle as alternating (vertex, edge) pairs, or empty if acyclic.
std::vector<std::pair<std::size_t, std::size_t>> find_cycle(const PlanarGraph& g,
                                                            const TildeGraph& t)
{
    enum { White, Gray, Black };
    std::vector<int> color(g.vertices.size(), White);
    std::vector<std::pair<std::size_t, std::size_t>> path; // (vertex, arc taken next)
    for (std::size_t root = 0; root < g.vertices.size(); ++root) {
        if (color[root] != White)
            continue;
        // iterative DFS; frame = (vertex, next succ position)
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        color[root] = Gray;
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            if (i == t.succ[v].size()) {
                color[v] = Black;
                stack.pop_back();
                continue;
            }
            std::size_t arc = t.succ[v][i++];
            std::size_t w = t.arcs[arc].to;
            if (color[w] == Gray) {
                // unwind the stack from w to v; frame.second points one past
                // the arc that led to the next frame
                std::vector<std::pair<std::size_t, std::size_t>> cyc;
                std::size_t j = stack.size();
                while (stack[j - 1].first != w)
                    --j;
                for (; j < stack.size(); ++j) {
                    const auto& prev = stack[j - 1];
                    std::size_t taken = t.succ[prev.first][prev.second - 1];
                    cyc.push_back({prev.first, t.arcs[taken].edge});
                }
                cyc.push_back({stack.back().first, t.arcs[arc].edge});
                return cyc;
            }
            if (color[w] == White) {
                color[w] = Gray;
                stack.push_back({w, 0});
            }
        }
    }
    return {};
}

std::vector<std::size_t> kahn_topological_order(const PlanarGraph& g, const TildeGraph& t)
{
    auto rank = shortlex_vertex_ranks(g);
    std::vector<std::size_t> indeg(g.vertices.size());
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        indeg[v] = t.pred[v].size();
    std::vector<std::size_t> by_rank(g.vertices.size());
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        by_rank[rank[v]] = v;
    std::vector<char> placed(g.vertices.size(), 0);
    std::vector<std::size_t> topo;
    while (topo.size() < g.vertices.size()) {
        std::size_t pick = g.vertices.size();
        for (std::size_t v : by_rank) {
            if (!placed[v] && indeg[v] == 0) {
                pick = v;
                break;
            }
        }
        if (pick == g.vertices.size())
            throw Error("topological sort on a cyclic graph");
        placed[pick] = 1;
        topo.push_back(pick);
        for (std::size_t arc : t.succ[pick])
            --indeg[t.arcs[arc].to];
    }
    return topo;
}

void require_coverage(const PlanarGraph& g)
{
    auto cover = vplus_coverage(g);
    auto comps = g.components();
    for (std::size_t c = 0; c < cover.size(); ++c)
        if (!cover[c])
            throw Error("component containing vertex '" + g.vertices[comps[c][0]].id +
                        "' has no V+ vertex");
}

} // namespace

std::vector<SStatus> status_table(const PlanarGraph& g, const TildeGraph& t,
                                  const std::vector<std::size_t>& topo, bool mirror)
{
    std::vector<SStatus> out(g.vertices.size());
    std::vector<char> done(g.vertices.size(), 0);
    for (std::size_t v : topo) {
        SStatus& s = out[v];
        s.s1 = true;
        const auto& in_arcs = mirror ? t.succ[v] : t.pred[v];
        for (std::size_t arc : in_arcs) {
            std::size_t p = mirror ? t.arcs[arc].to : t.arcs[arc].from;
            if (!done[p] || !out[p].s23) {
                s.s1 = false;
                break;
            }
            s.preds_used.push_back(p);
        }
        if (!s.s1)
            s.preds_used.clear();
        s.s23 = s.s1 && (g.vertices[v].vplus || !t.isolated(v));
        done[v] = 1;
    }
    return out;
}

CaseOutcome analyze_case(const PlanarGraph& g, const EdgeStateMap& st)
{
    require_coverage(g);
    TildeGraph t = build_tilde(g, st);

    CaseOutcome out;
    out.cycle = find_cycle(g, t);
    if (!out.cycle.empty()) {
        out.kind = CaseOutcome::Cycle;
        return out;
    }

    out.topo = kahn_topological_order(g, t);
    std::vector<std::size_t> rtopo(out.topo.rbegin(), out.topo.rend());
    auto fwd = status_table(g, t, out.topo, false);
    auto mir = status_table(g, t, rtopo, true);

    std::vector<char> in_v1(g.vertices.size(), 0);
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        if (fwd[v].s23 && mir[v].s23)
            in_v1[v] = 1;

    auto order = canonical_edge_order(g);
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t e : order) {
            std::size_t a = g.edges[e].tail, b = g.edges[e].head;
            if (in_v1[a] == in_v1[b])
                continue;
            std::size_t from = in_v1[a] ? a : b;
            std::size_t to = in_v1[a] ? b : a;
            in_v1[to] = 1;
            out.closure.push_back({e, from, to});
            grew = true;
        }
    }
    bool all = std::all_of(in_v1.begin(), in_v1.end(), [](char c) { return c != 0; });
    out.kind = all ? CaseOutcome::Residue : CaseOutcome::Survived;
    return out;
}

ProveResult prove_non_detection(const PlanarGraph& g, const std::string& vo, unsigned jobs)
{
    require_coverage(g);
    std::size_t vo_index = g.vertex_index(vo);
    if (!g.vertices[vo_index].vplus)
        throw Error("distinguished vertex '" + vo + "' is not a V+ vertex");

    std::uint64_t total = pow3(g.edges.size());
    std::vector<ProofTrace::Case> cases(total);
    auto run = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            cases[i].index = i;
            cases[i].outcome = analyze_case(g, state_from_index(g, i));
        }
    };
    if (jobs <= 1 || total < 2) {
        run(0, total);
    } else {
        unsigned n = static_cast<unsigned>(std::min<std::uint64_t>(jobs, total));
        std::vector<std::thread> threads;
        std::uint64_t chunk = (total + n - 1) / n;
        for (unsigned k = 0; k < n; ++k)
            threads.emplace_back(run, k * chunk, std::min<std::uint64_t>((k + 1) * chunk, total));
        for (auto& th : threads)
            th.join();
    }

    ProveResult result;
    for (const auto& c : cases) {
        if (c.outcome.kind == CaseOutcome::Survived) {
            result.survivor = c;
            return result;
        }
    }
    ProofTrace trace;
    trace.graph_hash = fnv1a(serialize_graph(g));
    for (const auto& v : g.vertices)
        if (v.vplus)
            trace.vplus.push_back(v.id);
    std::sort(trace.vplus.begin(), trace.vplus.end(),
              [](const std::string& a, const std::string& b) { return shortlex_less(a, b); });
    trace.vo = vo;
    trace.note = "peripheral pair of the distinguished vertex fixed up to conjugation "
                 "of the preorder";
    trace.cases = std::move(cases);
    result.trace = std::move(trace);
    return result;
}

namespace {

bool fail(std::string* why, const std::string& msg)
{
    if (why)
        *why = msg;
    return false;
}

} // namespace

bool check_trace(const PlanarGraph& g, const ProofTrace& t, std::string* why)
{
    if (t.graph_hash != fnv1a(serialize_graph(g)))
        return fail(why, "graph hash mismatch");
    std::vector<std::string> vplus;
    for (const auto& v : g.vertices)
        if (v.vplus)
            vplus.push_back(v.id);
    std::sort(vplus.begin(), vplus.end(),
              [](const std::string& a, const std::string& b) { return shortlex_less(a, b); });
    if (vplus != t.vplus)
        return fail(why, "V+ set mismatch");
    if (std::find(vplus.begin(), vplus.end(), t.vo) == vplus.end())
        return fail(why, "distinguished vertex not in V+");
    try {
        require_coverage(g);
    } catch (const Error& e) {
        return fail(why, e.what());
    }

    std::uint64_t total;
    try {
        total = pow3(g.edges.size());
    } catch (const Error& e) {
        return fail(why, e.what());
    }
    if (t.cases.size() != total)
        return fail(why, "case count is not 3^|E|");

    for (std::uint64_t i = 0; i < total; ++i) {
        const auto& c = t.cases[i];
        auto bad = [&](const std::string& msg) {
            return fail(why, "case " + std::to_string(i) + ": " + msg);
        };
        if (c.index != i)
            return bad("out-of-order case index " + std::to_string(c.index));
        EdgeStateMap st = state_from_index(g, i);
        TildeGraph tg = build_tilde(g, st);
        const CaseOutcome& o = c.outcome;

        if (o.kind == CaseOutcome::Cycle) {
            if (o.cycle.empty())
                return bad("empty cycle");
            for (std::size_t j = 0; j < o.cycle.size(); ++j) {
                auto [v, e] = o.cycle[j];
                std::size_t w = o.cycle[(j + 1) % o.cycle.size()].first;
                if (e >= g.edges.size() || v >= g.vertices.size())
                    return bad("cycle references unknown vertex or edge");
                bool ok = (st[e] == SignClass::POS && g.edges[e].tail == v &&
                           g.edges[e].head == w) ||
                          (st[e] == SignClass::NEG && g.edges[e].head == v &&
                           g.edges[e].tail == w);
                if (!ok)
                    return bad("cycle step " + std::to_string(j) + " is not an arc");
            }
            continue;
        }
        if (o.kind != CaseOutcome::Residue)
            return bad("surviving case in a trace");

        // topological order: a permutation respecting every arc
        if (o.topo.size() != g.vertices.size())
            return bad("topological order has wrong length");
        std::vector<std::size_t> pos(g.vertices.size(), SIZE_MAX);
        for (std::size_t j = 0; j < o.topo.size(); ++j) {
            if (o.topo[j] >= g.vertices.size() || pos[o.topo[j]] != SIZE_MAX)
                return bad("topological order is not a permutation");
            pos[o.topo[j]] = j;
        }
        for (const auto& a : tg.arcs)
            if (pos[a.from] >= pos[a.to])
                return bad("topological order violates an arc");

        // status invariants, both passes
        std::vector<std::size_t> rtopo(o.topo.rbegin(), o.topo.rend());
        auto fwd = status_table(g, tg, o.topo, false);
        auto mir = status_table(g, tg, rtopo, true);
        for (std::size_t v = 0; v < g.vertices.size(); ++v) {
            for (auto* tab : {&fwd, &mir}) {
                const SStatus& s = (*tab)[v];
                bool in_side = g.vertices[v].vplus || !tg.isolated(v);
                if (s.s23 && !(s.s1 && in_side))
                    return bad("s23 without its hypotheses at vertex " + g.vertices[v].id);
                if (s.s1) {
                    const auto& in_arcs = tab == &fwd ? tg.pred[v] : tg.succ[v];
                    if (s.preds_used.size() != in_arcs.size())
                        return bad("s1 with missing predecessors at vertex " + g.vertices[v].id);
                    for (std::size_t p : s.preds_used)
                        if (!(*tab)[p].s23)
                            return bad("s1 from a predecessor without s23");
                }
            }
        }
        // mirror isolation invariance is structural: arc reversal keeps degrees
        std::vector<char> in_v1(g.vertices.size(), 0);
        for (std::size_t v = 0; v < g.vertices.size(); ++v)
            if (fwd[v].s23 && mir[v].s23)
                in_v1[v] = 1;
        for (const auto& step : o.closure) {
            if (step.edge >= g.edges.size())
                return bad("closure step references unknown edge");
            const GraphEdge& e = g.edges[step.edge];
            bool endpoints_match = (e.tail == step.from && e.head == step.to) ||
                                   (e.head == step.from && e.tail == step.to);
            if (!endpoints_match)
                return bad("closure step endpoints do not match its edge");
            if (!in_v1[step.from])
                return bad("closure step from outside V1");
            if (in_v1[step.to])
                return bad("closure step re-adds a V1 vertex");
            in_v1[step.to] = 1;
        }
        for (std::size_t v = 0; v < g.vertices.size(); ++v)
            if (!in_v1[v])
                return bad("closure does not reach vertex " + g.vertices[v].id);
    }
    return true;
}

std::string write_trace(const PlanarGraph& g, const ProofTrace& t)
{
    std::ostringstream os;
    os << "graph " << hex64(t.graph_hash) << "\n";
    os << "vplus";
    for (const auto& v : t.vplus)
        os << " " << v;
    os << "\nvo " << t.vo << "\n";
    if (!t.note.empty())
        os << "note " << t.note << "\n";
    os << "cases " << t.cases.size() << "\n";
    for (const auto& c : t.cases) {
        os << "case " << c.index;
        if (c.outcome.kind == CaseOutcome::Cycle) {
            os << " cycle";
            for (auto [v, e] : c.outcome.cycle)
                os << " " << g.vertices[v].id << " " << g.edges[e].id;
        } else if (c.outcome.kind == CaseOutcome::Residue) {
            os << " residue topo " << c.outcome.topo.size();
            for (std::size_t v : c.outcome.topo)
                os << " " << g.vertices[v].id;
            os << " closure " << c.outcome.closure.size();
            for (const auto& s : c.outcome.closure)
                os << " " << g.edges[s.edge].id << " " << g.vertices[s.from].id << " "
                   << g.vertices[s.to].id;
        } else {
            os << " survived";
        }
        os << "\n";
    }
    return os.str();
}

ProofTrace parse_trace(const PlanarGraph& g, const std::string& text)
{
    ProofTrace t;
    std::istringstream is(text);
    std::string line;
    std::size_t expected_cases = 0;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head))
            continue;
        if (head == "graph") {
            std::string hex;
            ls >> hex;
            t.graph_hash = std::stoull(hex, nullptr, 16);
        } else if (head == "vplus") {
            std::string v;
            while (ls >> v)
                t.vplus.push_back(v);
        } else if (head == "vo") {
            ls >> t.vo;
        } else if (head == "note") {
            std::getline(ls, t.note);
            if (!t.note.empty() && t.note[0] == ' ')
                t.note.erase(0, 1);
        } else if (head == "cases") {
            ls >> expected_cases;
        } else if (head == "case") {
            ProofTrace::Case c;
            std::string kind;
            if (!(ls >> c.index >> kind))
                throw Error("malformed case line: " + line);
            if (kind == "cycle") {
                c.outcome.kind = CaseOutcome::Cycle;
                std::string v, e;
                while (ls >> v >> e)
                    c.outcome.cycle.push_back({g.vertex_index(v), g.edge_index(e)});
            } else if (kind == "residue") {
                c.outcome.kind = CaseOutcome::Residue;
                std::string tok;
                std::size_t n;
                if (!(ls >> tok >> n) || tok != "topo")
                    throw Error("malformed residue case: " + line);
                for (std::size_t j = 0; j < n; ++j) {
                    if (!(ls >> tok))
                        throw Error("truncated topological order: " + line);
                    c.outcome.topo.push_back(g.vertex_index(tok));
                }
                std::size_t m;
                if (!(ls >> tok >> m) || tok != "closure")
                    throw Error("malformed closure: " + line);
                for (std::size_t j = 0; j < m; ++j) {
                    std::string e, a, b;
                    if (!(ls >> e >> a >> b))
                        throw Error("truncated closure: " + line);
                    c.outcome.closure.push_back(
                        {g.edge_index(e), g.vertex_index(a), g.vertex_index(b)});
                }
            } else if (kind == "survived") {
                c.outcome.kind = CaseOutcome::Survived;
            } else {
                throw Error("unknown case kind '" + kind + "'");
            }
            t.cases.push_back(std::move(c));
        } else {
            throw Error("unknown trace directive '" + head + "'");
        }
    }
    if (t.cases.size() != expected_cases)
        throw Error("trace case count mismatch");
    return t;
}

} // namespace chainmail
