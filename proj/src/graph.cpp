#include "chainmail/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace chainmail {

namespace {

// shortlex, so "2" < "10" for numeric-looking ids
bool id_less(const std::string& a, const std::string& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

struct Token {
    std::string text;
    std::size_t line, col;
};

std::vector<std::vector<Token>> tokenize(const std::string& text)
{
    std::vector<std::vector<Token>> lines;
    std::istringstream is(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos)
            raw.resize(hash);
        std::vector<Token> toks;
        std::size_t i = 0;
        while (i < raw.size()) {
            if (std::isspace(static_cast<unsigned char>(raw[i]))) {
                ++i;
                continue;
            }
            std::size_t start = i;
            while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])))
                ++i;
            toks.push_back(Token{raw.substr(start, i - start), lineno, start + 1});
        }
        if (!toks.empty())
            lines.push_back(std::move(toks));
    }
    return lines;
}

[[noreturn]] void fail_at(const Token& t, const std::string& msg)
{
    throw Error("line " + std::to_string(t.line) + ", column " + std::to_string(t.col) + ": " + msg);
}

} // namespace

std::size_t PlanarGraph::vertex_index(const std::string& id) const
{
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i].id == id)
            return i;
    throw Error("unknown vertex '" + id + "'");
}

std::size_t PlanarGraph::edge_index(const std::string& id) const
{
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].id == id)
            return i;
    throw Error("unknown edge '" + id + "'");
}

std::vector<std::vector<std::size_t>> PlanarGraph::components() const
{
    std::vector<std::size_t> parent(vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : edges)
        parent[find(e.tail)] = find(e.head);
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t v = 0; v < vertices.size(); ++v)
        groups[find(v)].push_back(v);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : groups) {
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            return id_less(vertices[a].id, vertices[b].id);
        });
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        return id_less(vertices[a[0]].id, vertices[b[0]].id);
    });
    return out;
}

void PlanarGraph::check_invariants() const
{
    for (const auto& e : edges)
        if (e.tail == e.head)
            throw Error("self-loop on edge '" + e.id + "'");
    // every dart in exactly one rotation, at the right vertex
    std::vector<int> seen(2 * edges.size(), 0);
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        for (const auto& d : vertices[v].rotation) {
            if (d.edge >= edges.size())
                throw Error("rotation references unknown edge");
            if (dart_vertex(d) != v)
                throw Error("dart " + edges[d.edge].id + (d.head ? ".h" : ".t") +
                            " listed at vertex '" + vertices[v].id + "' but belongs to '" +
                            vertices[dart_vertex(d)].id + "'");
            if (++seen[2 * d.edge + (d.head ? 1 : 0)] > 1)
                throw Error("dart " + edges[d.edge].id + (d.head ? ".h" : ".t") +
                            " referenced twice");
        }
    }
    for (std::size_t e = 0; e < edges.size(); ++e)
        for (int h = 0; h < 2; ++h)
            if (!seen[2 * e + h])
                throw Error("dart " + edges[e].id + (h ? ".h" : ".t") +
                            " missing from all rotations");
}

PlanarGraph parse_graph(const std::string& text)
{
    PlanarGraph g;
    std::vector<std::vector<Token>> rotation_lines;
    for (const auto& toks : tokenize(text)) {
        const Token& head = toks[0];
        if (head.text == "vertex") {
            if (toks.size() < 2)
                fail_at(head, "vertex needs an id");
            GraphVertex v;
            v.id = toks[1].text;
            for (const auto& u : g.vertices)
                if (u.id == v.id)
                    fail_at(toks[1], "duplicate vertex id '" + v.id + "'");
            std::size_t i = 2;
            while (i < toks.size()) {
                if (toks[i].text == "vplus") {
                    v.vplus = true;
                    ++i;
                } else if (toks[i].text == "slope" && i + 1 < toks.size()) {
                    v.slope = Slope::parse(toks[i + 1].text);
                    i += 2;
                } else {
                    fail_at(toks[i], "unexpected token '" + toks[i].text + "'");
                }
            }
            g.vertices.push_back(std::move(v));
        } else if (head.text == "edge") {
            if (toks.size() < 4)
                fail_at(head, "edge needs an id, a tail and a head");
            GraphEdge e;
            e.id = toks[1].text;
            for (const auto& f : g.edges)
                if (f.id == e.id)
                    fail_at(toks[1], "duplicate edge id '" + e.id + "'");
            try {
                e.tail = g.vertex_index(toks[2].text);
                e.head = g.vertex_index(toks[3].text);
            } catch (const Error& err) {
                fail_at(toks[2], err.what());
            }
            if (e.tail == e.head)
                fail_at(toks[3], "self-loop on edge '" + e.id + "'");
            if (toks.size() == 6 && toks[4].text == "slope")
                e.slope = Slope::parse(toks[5].text);
            else if (toks.size() != 4)
                fail_at(toks[4], "unexpected token '" + toks[4].text + "'");
            g.edges.push_back(std::move(e));
        } else if (head.text == "rotation") {
            rotation_lines.push_back(toks);
        } else {
            fail_at(head, "unknown directive '" + head.text + "'");
        }
    }
    for (const auto& toks : rotation_lines) {
        if (toks.size() < 2)
            fail_at(toks[0], "rotation needs a vertex id");
        std::string vid = toks[1].text;
        if (!vid.empty() && vid.back() == ':')
            vid.pop_back();
        std::size_t v;
        try {
            v = g.vertex_index(vid);
        } catch (const Error& err) {
            fail_at(toks[1], err.what());
        }
        if (!g.vertices[v].rotation.empty())
            fail_at(toks[1], "duplicate rotation for vertex '" + vid + "'");
        for (std::size_t i = 2; i < toks.size(); ++i) {
            const std::string& t = toks[i].text;
            auto dot = t.rfind('.');
            if (dot == std::string::npos || dot + 2 != t.size() ||
                (t[dot + 1] != 't' && t[dot + 1] != 'h'))
                fail_at(toks[i], "dart must look like <edge>.t or <edge>.h");
            Dart d;
            try {
                d.edge = g.edge_index(t.substr(0, dot));
            } catch (const Error& err) {
                fail_at(toks[i], err.what());
            }
            d.head = t[dot + 1] == 'h';
            g.vertices[v].rotation.push_back(d);
        }
    }
    g.check_invariants();
    return g;
}

std::string serialize_graph(const PlanarGraph& g)
{
    std::ostringstream os;
    for (const auto& v : g.vertices) {
        os << "vertex " << v.id;
        if (v.vplus)
            os << " vplus";
        if (v.slope)
            os << " slope " << v.slope->str();
        os << "\n";
    }
    for (const auto& e : g.edges) {
        os << "edge " << e.id << " " << g.vertices[e.tail].id << " " << g.vertices[e.head].id;
        if (e.slope)
            os << " slope " << e.slope->str();
        os << "\n";
    }
    for (const auto& v : g.vertices) {
        if (v.rotation.empty())
            continue;
        os << "rotation " << v.id << ":";
        for (const auto& d : v.rotation)
            os << " " << g.edges[d.edge].id << (d.head ? ".h" : ".t");
        os << "\n";
    }
    return os.str();
}

FaceReport validate_embedding(const PlanarGraph& g)
{
    g.check_invariants();
    // dart numbering: 2*edge + (head ? 1 : 0)
    std::vector<std::size_t> rot_next(2 * g.edges.size());
    for (const auto& v : g.vertices) {
        const auto& rot = v.rotation;
        for (std::size_t i = 0; i < rot.size(); ++i) {
            const Dart &d = rot[i], &n = rot[(i + 1) % rot.size()];
            rot_next[2 * d.edge + d.head] = 2 * n.edge + n.head;
        }
    }
    auto comps = g.components();
    std::vector<std::size_t> comp_of(g.vertices.size());
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (std::size_t v : comps[c])
            comp_of[v] = c;

    std::vector<long long> faces(comps.size(), 0);
    std::vector<char> visited(2 * g.edges.size(), 0);
    for (std::size_t start = 0; start < 2 * g.edges.size(); ++start) {
        if (visited[start])
            continue;
        std::size_t d = start;
        do {
            visited[d] = 1;
            d = rot_next[d ^ 1]; // cross the edge, then turn
        } while (d != start);
        faces[comp_of[g.edges[start / 2].tail]]++;
    }

    FaceReport report;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        long long nv = static_cast<long long>(comps[c].size());
        long long ne = 0;
        for (const auto& e : g.edges)
            if (comp_of[e.tail] == c)
                ++ne;
        long long f = ne == 0 ? 1 : faces[c];
        long long euler = nv - ne + f;
        FaceReport::Component rc;
        rc.vertices = comps[c];
        rc.face_count = f;
        rc.genus = (2 - euler) / 2;
        if (euler % 2 != 0 || rc.genus < 0)
            throw Error("face tracing produced impossible Euler characteristic");
        report.components.push_back(std::move(rc));
    }
    return report;
}

bool FaceReport::all_planar() const
{
    return std::all_of(components.begin(), components.end(),
                       [](const Component& c) { return c.genus == 0; });
}

void require_genus_zero(const PlanarGraph& g)
{
    auto report = validate_embedding(g);
    for (const auto& c : report.components)
        if (c.genus != 0)
            throw Error("component containing vertex '" + g.vertices[c.vertices[0]].id +
                        "' has genus " + std::to_string(c.genus));
}

std::vector<OrientedCycle> cycle_basis(const PlanarGraph& g)
{
    // Kruskal in id order gives the lowest-id-first spanning forest.
    std::vector<std::size_t> order(g.edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return id_less(g.edges[a].id, g.edges[b].id);
    });
    std::vector<std::size_t> parent(g.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> tree_adj(g.vertices.size());
    std::vector<std::size_t> extra;
    for (std::size_t e : order) {
        std::size_t a = find(g.edges[e].tail), b = find(g.edges[e].head);
        if (a == b) {
            extra.push_back(e);
        } else {
            parent[a] = b;
            tree_adj[g.edges[e].tail].push_back({g.edges[e].head, e});
            tree_adj[g.edges[e].head].push_back({g.edges[e].tail, e});
        }
    }

    std::vector<OrientedCycle> basis;
    for (std::size_t e : extra) {
        std::size_t from = g.edges[e].tail, to = g.edges[e].head;
        // forest path from `from` to `to`
        std::vector<std::size_t> prev_vertex(g.vertices.size(), SIZE_MAX);
        std::vector<std::size_t> prev_edge(g.vertices.size(), SIZE_MAX);
        std::vector<std::size_t> stack{from};
        prev_vertex[from] = from;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            if (v == to)
                break;
            for (auto [w, f] : tree_adj[v]) {
                if (prev_vertex[w] == SIZE_MAX) {
                    prev_vertex[w] = v;
                    prev_edge[w] = f;
                    stack.push_back(w);
                }
            }
        }
        std::vector<std::pair<std::size_t, std::size_t>> path; // (edge, vertex it leads to)
        for (std::size_t v = to; v != from; v = prev_vertex[v])
            path.push_back({prev_edge[v], v});
        std::reverse(path.begin(), path.end());

        OrientedCycle cyc;
        std::size_t at = from;
        for (auto [f, w] : path) {
            OrientedCycle::Step s;
            s.vertex = at;
            s.edge = f;
            s.eps = g.edges[f].tail == at ? -1 : 1;
            cyc.steps.push_back(s);
            at = w;
        }
        OrientedCycle::Step last;
        last.vertex = at; // == to
        last.edge = e;
        last.eps = g.edges[e].tail == at ? -1 : 1; // closes back to `from`
        cyc.steps.push_back(last);
        basis.push_back(std::move(cyc));
    }
    return basis;
}

std::vector<bool> vplus_coverage(const PlanarGraph& g)
{
    std::vector<bool> out;
    for (const auto& comp : g.components()) {
        bool covered = std::any_of(comp.begin(), comp.end(),
                                   [&](std::size_t v) { return g.vertices[v].vplus; });
        out.push_back(covered);
    }
    return out;
}

} // namespace chainmail
