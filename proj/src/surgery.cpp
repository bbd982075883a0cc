#include "chainmail/surgery.hpp"

namespace chainmail {

namespace {

Word shift_word(const Word& w, int offset)
{
    std::vector<Word::Letter> letters = w.letters();
    for (auto& l : letters)
        l.gen += offset;
    return Word(std::move(letters));
}

} // namespace

Presentation dehn_fill(const Presentation& p, const std::string& component_id, Slope s)
{
    std::size_t pos = p.component_position(component_id);
    Presentation out = p;
    const PeripheralComponent comp = out.peripheral[pos];

    FilledRecord rec;
    rec.component = comp.id;
    rec.slope = s;
    rec.meridian = comp.meridian;
    rec.longitude = comp.longitude;
    rec.relator_index = out.relators.size();
    rec.peripheral_position = pos;

    out.relators.push_back(comp.meridian.power(s.p()).concat(comp.longitude.power(s.q())));
    out.peripheral.erase(out.peripheral.begin() + static_cast<std::ptrdiff_t>(pos));
    out.filled.push_back(std::move(rec));
    return out;
}

Presentation unfill(const Presentation& p, const std::string& component_id)
{
    if (p.filled.empty() || p.filled.back().component != component_id)
        throw Error("component '" + component_id + "' is not the most recently filled one");
    Presentation out = p;
    FilledRecord rec = out.filled.back();
    out.filled.pop_back();
    if (rec.relator_index + 1 != out.relators.size())
        throw Error("filling relator of '" + component_id + "' is not the last relator");
    out.relators.pop_back();

    PeripheralComponent comp;
    comp.id = rec.component;
    comp.meridian = rec.meridian;
    comp.longitude = rec.longitude;
    if (rec.peripheral_position > out.peripheral.size())
        throw Error("recorded peripheral position is out of range");
    out.peripheral.insert(out.peripheral.begin() +
                              static_cast<std::ptrdiff_t>(rec.peripheral_position),
                          std::move(comp));
    return out;
}

Presentation splice(const Presentation& p1, const std::string& c1, const Presentation& p2,
                    const std::string& c2)
{
    if (&p1 == &p2)
        throw Error("cannot splice a presentation with itself");
    std::size_t pos1 = p1.component_position(c1);
    std::size_t pos2 = p2.component_position(c2);
    int offset = static_cast<int>(p1.generator_names.size());
    std::size_t relator_offset = p1.relators.size();

    Presentation out;
    for (const auto& n : p1.generator_names)
        out.generator_names.push_back("1:" + n);
    for (const auto& n : p2.generator_names)
        out.generator_names.push_back("2:" + n);

    out.relators = p1.relators;
    for (const auto& r : p2.relators)
        out.relators.push_back(shift_word(r, offset));

    auto take = [&](const PeripheralComponent& c, const std::string& prefix, int off,
                    std::size_t rel_off) {
        PeripheralComponent d;
        d.id = prefix + c.id;
        d.meridian = shift_word(c.meridian, off);
        d.longitude = shift_word(c.longitude, off);
        for (const auto& [m, l] : c.rotated)
            d.rotated.push_back({shift_word(m, off), shift_word(l, off)});
        for (std::size_t i : c.vertex_relators)
            d.vertex_relators.push_back(i + rel_off);
        return d;
    };
    for (std::size_t i = 0; i < p1.peripheral.size(); ++i)
        if (i != pos1)
            out.peripheral.push_back(take(p1.peripheral[i], "1:", 0, 0));
    for (std::size_t i = 0; i < p2.peripheral.size(); ++i)
        if (i != pos2)
            out.peripheral.push_back(take(p2.peripheral[i], "2:", offset, relator_offset));

    const PeripheralComponent& a = p1.peripheral[pos1];
    PeripheralComponent b = take(p2.peripheral[pos2], "2:", offset, relator_offset);
    out.relators.push_back(a.meridian.concat(b.meridian.inverse()));
    out.relators.push_back(a.longitude.concat(b.longitude.inverse()));

    for (const auto& f : p1.filled) {
        FilledRecord g = f;
        g.component = "1:" + g.component;
        out.filled.push_back(std::move(g));
    }
    for (const auto& f : p2.filled) {
        FilledRecord g;
        g.component = "2:" + f.component;
        g.slope = f.slope;
        g.meridian = shift_word(f.meridian, offset);
        g.longitude = shift_word(f.longitude, offset);
        g.relator_index = f.relator_index + relator_offset;
        g.peripheral_position = f.peripheral_position;
        out.filled.push_back(std::move(g));
    }
    return out;
}

} // namespace chainmail
