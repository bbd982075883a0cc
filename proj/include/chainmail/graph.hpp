#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chainmail/slope.hpp"

namespace chainmail {

// A dart is one end of an edge; every edge has exactly two.
struct Dart {
    std::size_t edge;
    bool head; // false = tail end, true = head end

    bool operator==(const Dart& o) const { return edge == o.edge && head == o.head; }
};

struct GraphVertex {
    std::string id;
    std::vector<Dart> rotation; // incident darts in counterclockwise order
    bool vplus = false;
    std::optional<Slope> slope;
};

struct GraphEdge {
    std::string id;
    std::size_t tail, head; // vertex indices; tail != head
    std::optional<Slope> slope;
};

// Planar graph with an explicit combinatorial embedding.  Parallel edges are
// allowed, self-loops are not, and isolated vertices model unknot components.
class PlanarGraph {
public:
    std::vector<GraphVertex> vertices;
    std::vector<GraphEdge> edges;

    std::size_t vertex_index(const std::string& id) const;
    std::size_t edge_index(const std::string& id) const;
    std::size_t dart_vertex(const Dart& d) const
    {
        return d.head ? edges[d.edge].head : edges[d.edge].tail;
    }
    std::size_t degree(std::size_t v) const { return vertices[v].rotation.size(); }

    // connected components as sorted vertex-index lists, ordered by smallest
    // member
    std::vector<std::vector<std::size_t>> components() const;

    void check_invariants() const; // throws Error on violation
};

PlanarGraph parse_graph(const std::string& text);
std::string serialize_graph(const PlanarGraph& g);

struct FaceReport {
    struct Component {
        std::vector<std::size_t> vertices;
        long long face_count;
        long long genus;
    };
    std::vector<Component> components;

    bool all_planar() const;
};

// Traces the faces of the rotation system and reports F and genus per
// connected component via V - E + F = 2 - 2g.
FaceReport validate_embedding(const PlanarGraph& g);

// Throws unless every component has genus zero.
void require_genus_zero(const PlanarGraph& g);

struct OrientedCycle {
    struct Step {
        std::size_t vertex;
        std::size_t edge;
        int eps; // -1 iff the edge is oriented from this vertex to the next
    };
    std::vector<Step> steps;
};

// Fundamental cycles of a lowest-id-first spanning forest; |E| - |V| + c of
// them.
std::vector<OrientedCycle> cycle_basis(const PlanarGraph& g);

// One flag per connected component (in components() order): does it contain a
// V+ vertex?
std::vector<bool> vplus_coverage(const PlanarGraph& g);

} // namespace chainmail
