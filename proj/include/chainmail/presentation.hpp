#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chainmail/graph.hpp"
#include "chainmail/word.hpp"

namespace chainmail {

// Peripheral torus of a link component.  For an edge loop the pair is
// (mu_e, la_e); for a vertex loop it is (mu_{v,e1}, mu_{e1}^eps1 ... mu_{ek}^epsk)
// with e1 the first edge of the rotation.  Vertex loops also carry the rotated
// family of conjugate pairs, one per rotation position.
struct PeripheralComponent {
    std::string id;
    Word meridian, longitude;
    std::vector<std::pair<Word, Word>> rotated;
    std::vector<std::size_t> vertex_relators; // indices of this vertex's relators
};

struct FilledRecord {
    std::string component;
    Slope slope{1, 0};
    Word meridian, longitude;
    std::size_t relator_index;      // where the filling relator was inserted
    std::size_t peripheral_position; // where the component sat before removal
};

struct Presentation {
    std::vector<std::string> generator_names;
    std::vector<Word> relators;
    std::vector<PeripheralComponent> peripheral;
    std::vector<FilledRecord> filled;

    int generator(const std::string& name) const; // -1 if absent
    const PeripheralComponent* find_component(const std::string& id) const;
    std::size_t component_position(const std::string& id) const; // throws if absent

    void check_invariants() const;

    std::string serialize() const;
    std::uint64_t content_hash() const { return fnv1a(serialize()); }
};

Presentation parse_presentation(const std::string& text);

// The link-group presentation of the flat fully augmented chainmail link of g.
// Generators mu_e, la_e per edge, muv_v_e per incidence and m_v per isolated
// vertex; relators in order: vertex conjugation relators, edge relators, cycle
// relators, peripheral commutators [mu_e, la_e].
Presentation chainmail_presentation(const PlanarGraph& g);

// Exponent-sum matrix: one row per relator, one column per generator.
std::vector<std::vector<long long>> abelianization_rows(const Presentation& p);

// A derivation is a chain of relator insertions.  Each step inserts
// relators[relator]^(inverted ? -1 : 1) after `position` letters of the
// previous word and freely reduces.
struct DerivationStep {
    std::size_t relator;
    bool inverted;
    std::size_t position;
    Word result;
};

struct Derivation {
    Word start, target;
    std::vector<DerivationStep> steps;
};

// Rewrites mu_{v,e1} into longitude * mu_{v,e1} * longitude^-1 through the
// deg(v) vertex relators, witnessing that the rotated peripheral pairs are
// conjugate.
Derivation derive_peripheral_commutation(const Presentation& p, const std::string& vertex_id);

bool check_derivation(const Presentation& p, const Derivation& d);

} // namespace chainmail
