#include "chainmail/presentation.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace chainmail {

namespace {

bool id_less(const std::string& a, const std::string& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

} // namespace

int Presentation::generator(const std::string& name) const
{
    auto it = std::find(generator_names.begin(), generator_names.end(), name);
    return it == generator_names.end() ? -1 : static_cast<int>(it - generator_names.begin());
}

const PeripheralComponent* Presentation::find_component(const std::string& id) const
{
    for (const auto& c : peripheral)
        if (c.id == id)
            return &c;
    return nullptr;
}

std::size_t Presentation::component_position(const std::string& id) const
{
    for (std::size_t i = 0; i < peripheral.size(); ++i)
        if (peripheral[i].id == id)
            return i;
    throw Error("unknown peripheral component '" + id + "'");
}

void Presentation::check_invariants() const
{
    std::set<std::string> names(generator_names.begin(), generator_names.end());
    if (names.size() != generator_names.size())
        throw Error("duplicate generator names");
    auto check_word = [&](const Word& w, const char* what) {
        for (const auto& l : w.letters())
            if (l.gen < 0 || static_cast<std::size_t>(l.gen) >= generator_names.size())
                throw Error(std::string(what) + " mentions an undeclared generator");
    };
    for (const auto& r : relators)
        check_word(r, "relator");
    for (const auto& c : peripheral) {
        check_word(c.meridian, "peripheral meridian");
        check_word(c.longitude, "peripheral longitude");
    }
}

std::string Presentation::serialize() const
{
    std::ostringstream os;
    for (const auto& n : generator_names)
        os << "gen " << n << "\n";
    for (const auto& r : relators)
        os << "rel " << r.str(generator_names) << "\n";
    for (const auto& c : peripheral)
        os << "periph " << c.id << " meridian " << c.meridian.str(generator_names)
           << " longitude " << c.longitude.str(generator_names) << "\n";
    for (const auto& f : filled)
        os << "filled " << f.component << " " << f.slope.str() << " meridian "
           << f.meridian.str(generator_names) << " longitude "
           << f.longitude.str(generator_names) << " rel " << f.relator_index << " pos "
           << f.peripheral_position << "\n";
    return os.str();
}

Presentation parse_presentation(const std::string& text)
{
    Presentation p;
    std::istringstream is(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos)
            raw.resize(hash);
        std::istringstream ls(raw);
        std::string kind;
        if (!(ls >> kind))
            continue;
        auto fail = [&](const std::string& msg) -> void {
            throw Error("line " + std::to_string(lineno) + ": " + msg);
        };
        auto read_word_until = [&](const std::string& stop) {
            std::string tok, acc;
            while (ls >> tok) {
                if (tok == stop)
                    return std::pair{acc, true};
                if (!acc.empty())
                    acc += " ";
                acc += tok;
            }
            return std::pair{acc, false};
        };
        if (kind == "gen") {
            std::string name;
            if (!(ls >> name))
                fail("gen needs a name");
            p.generator_names.push_back(name);
        } else if (kind == "rel") {
            std::string rest;
            std::getline(ls, rest);
            p.relators.push_back(Word::parse(rest, p.generator_names));
        } else if (kind == "periph") {
            PeripheralComponent c;
            std::string kw;
            if (!(ls >> c.id >> kw) || kw != "meridian")
                fail("periph needs '<id> meridian <word> longitude <word>'");
            auto [mer, found] = read_word_until("longitude");
            if (!found)
                fail("periph is missing 'longitude'");
            std::string rest;
            std::getline(ls, rest);
            c.meridian = Word::parse(mer, p.generator_names);
            c.longitude = Word::parse(rest, p.generator_names);
            p.peripheral.push_back(std::move(c));
        } else if (kind == "filled") {
            FilledRecord f;
            std::string comp, slope, kw;
            if (!(ls >> comp >> slope))
                fail("filled needs '<id> <p>/<q>'");
            f.component = comp;
            f.slope = Slope::parse(slope);
            f.relator_index = p.relators.empty() ? 0 : p.relators.size() - 1;
            f.peripheral_position = p.peripheral.size();
            if (ls >> kw && kw == "meridian") {
                auto [mer, found] = read_word_until("longitude");
                if (!found)
                    fail("filled is missing 'longitude'");
                auto [lon, found2] = read_word_until("rel");
                f.meridian = Word::parse(mer, p.generator_names);
                f.longitude = Word::parse(lon, p.generator_names);
                if (found2) {
                    if (!(ls >> f.relator_index >> kw >> f.peripheral_position) || kw != "pos")
                        fail("bad filled bookkeeping fields");
                }
            }
            p.filled.push_back(std::move(f));
        } else {
            fail("unknown directive '" + kind + "'");
        }
    }
    p.check_invariants();
    return p;
}

Presentation chainmail_presentation(const PlanarGraph& g)
{
    require_genus_zero(g);
    Presentation p;

    std::vector<std::size_t> edge_order(g.edges.size());
    std::iota(edge_order.begin(), edge_order.end(), 0);
    std::sort(edge_order.begin(), edge_order.end(),
              [&](std::size_t a, std::size_t b) { return id_less(g.edges[a].id, g.edges[b].id); });
    std::vector<std::size_t> vertex_order(g.vertices.size());
    std::iota(vertex_order.begin(), vertex_order.end(), 0);
    std::sort(vertex_order.begin(), vertex_order.end(), [&](std::size_t a, std::size_t b) {
        return id_less(g.vertices[a].id, g.vertices[b].id);
    });

    // generators: mu_e, la_e per edge; muv_v_e per incidence; m_v per isolated
    // vertex
    std::vector<int> mu(g.edges.size(), -1), la(g.edges.size(), -1);
    auto add_gen = [&](const std::string& name) {
        p.generator_names.push_back(name);
        return static_cast<int>(p.generator_names.size() - 1);
    };
    for (std::size_t e : edge_order) {
        mu[e] = add_gen("mu_" + g.edges[e].id);
        la[e] = add_gen("la_" + g.edges[e].id);
    }
    std::vector<std::vector<int>> muv(g.vertices.size()); // by rotation position
    std::vector<int> m_isolated(g.vertices.size(), -1);
    for (std::size_t v : vertex_order) {
        for (const auto& d : g.vertices[v].rotation)
            muv[v].push_back(add_gen("muv_" + g.vertices[v].id + "_" + g.edges[d.edge].id));
        if (g.vertices[v].rotation.empty())
            m_isolated[v] = add_gen("m_" + g.vertices[v].id);
    }
    {
        std::set<std::string> names(p.generator_names.begin(), p.generator_names.end());
        if (names.size() != p.generator_names.size())
            throw Error("vertex/edge ids produce colliding generator names");
    }

    auto eps_at = [&](const Dart& d) { return d.head ? -1 : 1; };

    // (i) vertex relators: muv_{v,e_i} * (mu_{e_i}^eps_i muv_{v,e_{i+1}} mu_{e_i}^-eps_i)^-1
    std::vector<std::vector<std::size_t>> vertex_rel_indices(g.vertices.size());
    for (std::size_t v : vertex_order) {
        const auto& rot = g.vertices[v].rotation;
        for (std::size_t i = 0; i < rot.size(); ++i) {
            std::size_t j = (i + 1) % rot.size();
            int e = static_cast<int>(eps_at(rot[i]));
            Word rhs = Word::generator(muv[v][j])
                           .conjugate(Word::generator(mu[rot[i].edge], e));
            vertex_rel_indices[v].push_back(p.relators.size());
            p.relators.push_back(Word::generator(muv[v][i]).concat(rhs.inverse()));
        }
    }
    // (ii) edge relators: muv_{v2,e} la_e mu_e^-1 muv_{v1,e}^-1 mu_e
    for (std::size_t e : edge_order) {
        std::size_t v1 = g.edges[e].tail, v2 = g.edges[e].head;
        auto muv_at = [&](std::size_t v) {
            const auto& rot = g.vertices[v].rotation;
            for (std::size_t i = 0; i < rot.size(); ++i)
                if (rot[i].edge == e)
                    return muv[v][i];
            throw Error("edge missing from endpoint rotation");
        };
        Word w = Word::generator(muv_at(v2))
                     .concat(Word::generator(la[e]))
                     .concat(Word::generator(mu[e], -1))
                     .concat(Word::generator(muv_at(v1), -1))
                     .concat(Word::generator(mu[e]));
        p.relators.push_back(w);
    }
    // (iii) cycle relators
    for (const auto& cyc : cycle_basis(g)) {
        Word w;
        for (const auto& s : cyc.steps)
            w = w.concat(Word::generator(la[s.edge], s.eps));
        p.relators.push_back(w);
    }
    // (iv) peripheral commutators [mu_e, la_e]
    for (std::size_t e : edge_order) {
        Word w = Word::generator(mu[e])
                     .concat(Word::generator(la[e]))
                     .concat(Word::generator(mu[e], -1))
                     .concat(Word::generator(la[e], -1));
        p.relators.push_back(w);
    }

    // peripheral system: edge loops first, then vertex loops
    for (std::size_t e : edge_order) {
        PeripheralComponent c;
        c.id = g.edges[e].id;
        c.meridian = Word::generator(mu[e]);
        c.longitude = Word::generator(la[e]);
        p.peripheral.push_back(std::move(c));
    }
    for (std::size_t v : vertex_order) {
        PeripheralComponent c;
        c.id = g.vertices[v].id;
        const auto& rot = g.vertices[v].rotation;
        if (rot.empty()) {
            c.meridian = Word::generator(m_isolated[v]);
        } else {
            auto rotated_longitude = [&](std::size_t from) {
                Word w;
                for (std::size_t k = 0; k < rot.size(); ++k) {
                    const Dart& d = rot[(from + k) % rot.size()];
                    w = w.concat(Word::generator(mu[d.edge], eps_at(d)));
                }
                return w;
            };
            c.meridian = Word::generator(muv[v][0]);
            c.longitude = rotated_longitude(0);
            for (std::size_t i = 0; i < rot.size(); ++i)
                c.rotated.push_back({Word::generator(muv[v][i]), rotated_longitude(i)});
            c.vertex_relators = vertex_rel_indices[v];
        }
        p.peripheral.push_back(std::move(c));
    }
    p.check_invariants();
    return p;
}

std::vector<std::vector<long long>> abelianization_rows(const Presentation& p)
{
    std::vector<std::vector<long long>> rows;
    rows.reserve(p.relators.size());
    for (const auto& r : p.relators)
        rows.push_back(r.exponent_sums(p.generator_names.size()));
    return rows;
}

Derivation derive_peripheral_commutation(const Presentation& p, const std::string& vertex_id)
{
    const PeripheralComponent* c = p.find_component(vertex_id);
    if (!c)
        throw Error("unknown peripheral component '" + vertex_id + "'");
    if (c->vertex_relators.empty())
        throw Error("component '" + vertex_id + "' is not a vertex loop of degree >= 1");

    Derivation d;
    d.start = c->meridian;
    d.target = c->meridian.conjugate(c->longitude);
    Word w = d.start;
    // step i replaces muv_{v,e_i} by mu_{e_i}^eps muv_{v,e_{i+1}} mu_{e_i}^-eps:
    // insert relator_i^-1 just before the muv letter, which sits after i
    // conjugating letters.
    for (std::size_t i = 0; i < c->vertex_relators.size(); ++i) {
        DerivationStep step;
        step.relator = c->vertex_relators[i];
        step.inverted = true;
        step.position = i; // |mu_{e_1}^eps ... mu_{e_i}^eps| prefix
        w = w.insert_at(step.position, p.relators[step.relator].inverse());
        step.result = w;
        d.steps.push_back(std::move(step));
    }
    if (w != d.target)
        throw Error("peripheral commutation derivation failed to close");
    return d;
}

bool check_derivation(const Presentation& p, const Derivation& d)
{
    Word w = d.start;
    for (const auto& s : d.steps) {
        if (s.relator >= p.relators.size())
            return false;
        Word r = p.relators[s.relator];
        if (s.inverted)
            r = r.inverse();
        if (s.position > w.length())
            return false;
        w = w.insert_at(s.position, r);
        if (w != s.result)
            return false;
    }
    return w == d.target;
}

} // namespace chainmail
