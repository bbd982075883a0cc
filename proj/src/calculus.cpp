#include "chainmail/calculus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "chainmail/surgery.hpp"

namespace chainmail {

namespace {

const char* kind_name(SpecEntry::Kind k)
{
    switch (k) {
    case SpecEntry::WeakAllConj:
        return "weak-all";
    case SpecEntry::WeakSingle:
        return "weak-single";
    case SpecEntry::Strong:
        return "strong";
    }
    return "?";
}

// keep entries sorted by component id; duplicates are a bug in the caller
void insert_entry(BoundarySpec& spec, SpecEntry e)
{
    auto it = std::lower_bound(spec.entries.begin(), spec.entries.end(), e,
                               [](const SpecEntry& a, const SpecEntry& b) {
                                   return shortlex_less(a.component, b.component);
                               });
    if (it != spec.entries.end() && it->component == e.component)
        throw Error("duplicate spec entry for component '" + e.component + "'");
    spec.entries.insert(it, std::move(e));
}

NonDetectionFact finish(NonDetectionFact f)
{
    f.presentation_hash = f.presentation.content_hash();
    f.check();
    return f;
}

} // namespace

std::string SpecEntry::str() const
{
    std::string out = component;
    out += ' ';
    out += kind_name(kind);
    out += ' ';
    out += kind == Strong ? slope.str() : slopes.str();
    return out;
}

std::string BoundarySpec::str() const
{
    std::string out;
    for (const auto& e : entries) {
        out += "entry ";
        out += e.str();
        out += '\n';
    }
    return out;
}

const SpecEntry* BoundarySpec::find(const std::string& component) const
{
    for (const auto& e : entries)
        if (e.component == component)
            return &e;
    return nullptr;
}

void NonDetectionFact::check() const
{
    if (presentation_hash != presentation.content_hash())
        throw Error("fact hash does not match its presentation");
    std::size_t singles = 0;
    for (std::size_t i = 0; i < spec.entries.size(); ++i) {
        const auto& e = spec.entries[i];
        if (i > 0 && !shortlex_less(spec.entries[i - 1].component, e.component))
            throw Error("spec entries out of order at '" + e.component + "'");
        if (!presentation.find_component(e.component))
            throw Error("spec entry '" + e.component + "' is not a peripheral component");
        if (e.kind == SpecEntry::WeakSingle)
            ++singles;
        if (e.kind != SpecEntry::Strong && e.slopes.is_empty())
            throw Error("empty slope set in spec entry '" + e.component + "'");
    }
    if (singles > 1)
        throw Error("more than one weak-single spec entry");
}

std::string Provenance::str(int indent) const
{
    std::string pad(2 * static_cast<std::size_t>(indent), ' ');
    std::string out = pad;
    switch (kind) {
    case Base:
        out += "base vo=" + vo + " graph=" + hex64(fnv1a(graph_text));
        break;
    case Strengthen:
        out += "strengthen " + comp + " " + slope.str();
        break;
    case FillQuotient:
        out += "fill-quotient " + comp;
        break;
    case FillUnquotient:
        out += "fill-unquotient " + comp;
        break;
    case Glue:
        out += "glue " + comp + " " + comp2;
        break;
    }
    out += '\n';
    for (const auto& prem : premises)
        out += prem->provenance.str(indent + 1);
    return out;
}

std::string NonDetectionFact::str() const
{
    std::string out = "fact " + hex64(presentation_hash) + "\n";
    out += spec.str();
    out += "provenance\n";
    out += provenance.str(1);
    out += "end\n";
    return out;
}

NonDetectionFact fact_from_trace(const PlanarGraph& g, const ProofTrace& trace)
{
    std::string why;
    if (!check_trace(g, trace, &why))
        throw Error("invalid trace: " + why);

    NonDetectionFact f;
    f.presentation = chainmail_presentation(g);

    std::set<std::string> edge_ids, vplus(trace.vplus.begin(), trace.vplus.end());
    for (const auto& e : g.edges)
        edge_ids.insert(e.id);

    for (const auto& c : f.presentation.peripheral) {
        SpecEntry e;
        e.component = c.id;
        if (edge_ids.count(c.id)) {
            e.kind = SpecEntry::WeakAllConj;
            e.slopes = SlopeSet::negatives();
        } else if (c.id == trace.vo) {
            e.kind = SpecEntry::WeakSingle;
            e.slopes = SlopeSet::positives();
        } else if (vplus.count(c.id)) {
            e.kind = SpecEntry::WeakAllConj;
            e.slopes = SlopeSet::positives();
        } else {
            e.kind = SpecEntry::Strong;
            e.slope = Slope(0, 1);
        }
        insert_entry(f.spec, std::move(e));
    }

    f.provenance.kind = Provenance::Base;
    f.provenance.graph_text = serialize_graph(g);
    f.provenance.vo = trace.vo;
    return finish(std::move(f));
}

NonDetectionFact strengthen_weak_to_strong(const NonDetectionFact& f, const std::string& comp,
                                           Slope s)
{
    f.check();
    NonDetectionFact out = f;
    SpecEntry* e = nullptr;
    for (auto& x : out.spec.entries)
        if (x.component == comp)
            e = &x;
    if (!e)
        throw Error("no spec entry for component '" + comp + "'");
    if (e->kind == SpecEntry::Strong)
        throw Error("entry '" + comp + "' is already strong");
    if (!e->slopes.contains(s))
        throw Error("slope " + s.str() + " is outside the entry's slope set " + e->slopes.str());
    e->kind = SpecEntry::Strong;
    e->slope = s;
    e->slopes = SlopeSet();
    out.provenance = Provenance{};
    out.provenance.kind = Provenance::Strengthen;
    out.provenance.comp = comp;
    out.provenance.slope = s;
    out.provenance.premises.push_back(std::make_shared<const NonDetectionFact>(f));
    return finish(std::move(out));
}

NonDetectionFact apply_fill(const NonDetectionFact& f, const std::string& comp, FillDirection dir)
{
    f.check();
    NonDetectionFact out;
    if (dir == FillDirection::Quotient) {
        const SpecEntry* e = f.spec.find(comp);
        if (!e)
            throw Error("no spec entry for component '" + comp + "'");
        if (e->kind != SpecEntry::Strong)
            throw Error("entry '" + comp + "' is not strong; only strong entries transfer "
                        "across a filling");
        out.presentation = dehn_fill(f.presentation, comp, e->slope);
        for (const auto& x : f.spec.entries)
            if (x.component != comp)
                insert_entry(out.spec, x);
        out.provenance.kind = Provenance::FillQuotient;
    } else {
        if (f.spec.find(comp))
            throw Error("component '" + comp + "' still has a spec entry; nothing to restore");
        const FilledRecord* rec = nullptr;
        for (const auto& r : f.presentation.filled)
            if (r.component == comp)
                rec = &r;
        if (!rec)
            throw Error("component '" + comp + "' was never filled");
        out.presentation = unfill(f.presentation, comp);
        out.spec = f.spec;
        SpecEntry e;
        e.kind = SpecEntry::Strong;
        e.component = comp;
        e.slope = rec->slope;
        insert_entry(out.spec, std::move(e));
        out.provenance.kind = Provenance::FillUnquotient;
    }
    out.provenance.comp = comp;
    out.provenance.premises.push_back(std::make_shared<const NonDetectionFact>(f));
    return finish(std::move(out));
}

NonDetectionFact apply_glue(const NonDetectionFact& f1, const std::string& c1,
                            const NonDetectionFact& f2, const std::string& c2)
{
    f1.check();
    f2.check();
    const SpecEntry* e1 = f1.spec.find(c1);
    if (!e1)
        throw Error("no spec entry for component '" + c1 + "'");
    if (e1->kind != SpecEntry::WeakSingle)
        throw Error("entry '" + c1 + "' is not the weak-single entry of its fact");
    const SpecEntry* e2 = f2.spec.find(c2);
    if (!e2)
        throw Error("no spec entry for component '" + c2 + "'");
    if (e2->kind != SpecEntry::WeakAllConj)
        throw Error("entry '" + c2 + "' must be weak over all conjugates");
    if (!e1->slopes.unite(e2->slopes).covers_projective_line())
        throw Error("slope sets " + e1->slopes.str() + " and " + e2->slopes.str() +
                    " do not cover the projective line");
    bool other_single = false;
    for (const auto& x : f2.spec.entries)
        if (x.kind == SpecEntry::WeakSingle && x.component != c2)
            other_single = true;
    if (!other_single)
        throw Error("the second fact needs a weak-single entry away from '" + c2 + "'");

    NonDetectionFact out;
    out.presentation = splice(f1.presentation, c1, f2.presentation, c2);
    for (const auto& x : f1.spec.entries)
        if (x.component != c1) {
            SpecEntry e = x;
            e.component = "1:" + e.component;
            insert_entry(out.spec, std::move(e));
        }
    for (const auto& x : f2.spec.entries)
        if (x.component != c2) {
            SpecEntry e = x;
            e.component = "2:" + e.component;
            insert_entry(out.spec, std::move(e));
        }
    out.provenance.kind = Provenance::Glue;
    out.provenance.comp = c1;
    out.provenance.comp2 = c2;
    out.provenance.premises.push_back(std::make_shared<const NonDetectionFact>(f1));
    out.provenance.premises.push_back(std::make_shared<const NonDetectionFact>(f2));
    return finish(std::move(out));
}

Verdict conclude_non_LO(const NonDetectionFact& f)
{
    f.check();
    if (!f.spec.entries.empty())
        throw Error("spec still has " + std::to_string(f.spec.entries.size()) +
                    " boundary entries; fill or glue them first");
    Verdict v;
    v.statement = "no proper left total preorder; no left-orderable quotient; "
                  "fundamental group not left-orderable";
    v.h1 = h1_invariants(f.presentation);
    std::ostringstream os;
    os << "verdict non-LO\n";
    os << "statement: " << v.statement << "\n";
    os << "H1 = " << v.h1.str() << "\n";
    if (v.h1.finite)
        os << "|H1| = " << v.h1.order << "\n";
    else
        os << "|H1| infinite\n";
    os << "provenance\n" << f.provenance.str(1) << "end\n";
    v.report = os.str();
    return v;
}

namespace {

NonDetectionFact rebuild(const NonDetectionFact& f)
{
    const Provenance& p = f.provenance;
    switch (p.kind) {
    case Provenance::Base: {
        PlanarGraph g = parse_graph(p.graph_text);
        ProveResult r = prove_non_detection(g, p.vo, 1);
        if (!r.trace)
            throw Error("base proof no longer succeeds");
        return fact_from_trace(g, *r.trace);
    }
    case Provenance::Strengthen:
        return strengthen_weak_to_strong(rebuild(*p.premises.at(0)), p.comp, p.slope);
    case Provenance::FillQuotient:
        return apply_fill(rebuild(*p.premises.at(0)), p.comp, FillDirection::Quotient);
    case Provenance::FillUnquotient:
        return apply_fill(rebuild(*p.premises.at(0)), p.comp, FillDirection::Unquotient);
    case Provenance::Glue:
        return apply_glue(rebuild(*p.premises.at(0)), p.comp, rebuild(*p.premises.at(1)),
                          p.comp2);
    }
    throw Error("unknown provenance kind");
}

} // namespace

bool replay_provenance(const NonDetectionFact& f, std::string* why)
{
    try {
        NonDetectionFact r = rebuild(f);
        if (r.presentation.serialize() != f.presentation.serialize()) {
            if (why)
                *why = "replayed presentation differs";
            return false;
        }
        if (r.spec.str() != f.spec.str()) {
            if (why)
                *why = "replayed spec differs";
            return false;
        }
        return true;
    } catch (const Error& e) {
        if (why)
            *why = e.what();
        return false;
    }
}

std::string write_fact_store(const std::vector<NonDetectionFact>& facts)
{
    std::string out;
    for (const auto& f : facts)
        out += f.str();
    return out;
}

} // namespace chainmail
