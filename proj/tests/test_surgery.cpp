#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "chainmail/homology.hpp"
#include "chainmail/surgery.hpp"
#include "corpus.hpp"

using namespace chainmail;

TEST_CASE("fill appends the slope relator and drops the component")
{
    Presentation p = chainmail_presentation(parse_graph(corpus::p2_text()));
    Presentation q = dehn_fill(p, "e1", Slope(-2, 3));
    CHECK(q.relators.size() == p.relators.size() + 1);
    CHECK(q.peripheral.size() == p.peripheral.size() - 1);
    CHECK(q.find_component("e1") == nullptr);
    REQUIRE(q.filled.size() == 1);
    CHECK(q.filled[0].component == "e1");
    CHECK(q.filled[0].slope == Slope(-2, 3));
    const PeripheralComponent* c = p.find_component("e1");
    Word expect = c->meridian.power(-2).concat(c->longitude.power(3));
    CHECK(q.relators.back() == expect);
    CHECK_THROWS_AS(dehn_fill(p, "zzz", Slope(1, 1)), Error);
    CHECK_THROWS_AS(dehn_fill(q, "e1", Slope(1, 1)), Error); // already gone
}

TEST_CASE("unfill restores the presentation byte for byte")
{
    std::mt19937 rng(3);
    for (int t = 0; t < 10; ++t) {
        Presentation p = chainmail_presentation(corpus::random_graph(rng));
        std::string id = p.peripheral[rng() % p.peripheral.size()].id;
        Presentation q = dehn_fill(p, id, Slope(3, 2));
        Presentation r = unfill(q, id);
        CHECK(r.serialize() == p.serialize());
    }
    Presentation p = chainmail_presentation(parse_graph(corpus::p2_text()));
    CHECK_THROWS_AS(unfill(p, "e1"), Error); // nothing filled
}

TEST_CASE("nested fills unfill in reverse order")
{
    Presentation p = chainmail_presentation(parse_graph(corpus::triangle_text()));
    Presentation q = dehn_fill(dehn_fill(p, "e1", Slope(-1, 1)), "v2", Slope(1, 1));
    Presentation r = unfill(unfill(q, "v2"), "e1");
    CHECK(r.serialize() == p.serialize());
    // the earlier fill's relator is not last, so it cannot be undone first
    CHECK_THROWS_AS(unfill(q, "e1"), Error);
}

TEST_CASE("splice makes the free product with glued peripheral pairs")
{
    Presentation a = chainmail_presentation(parse_graph(corpus::p2_text()));
    Presentation b = chainmail_presentation(parse_graph(corpus::triangle_text()));
    Presentation s = splice(a, "v1", b, "v2");
    CHECK(s.generator_names.size() == a.generator_names.size() + b.generator_names.size());
    CHECK(s.relators.size() == a.relators.size() + b.relators.size() + 2);
    CHECK(s.peripheral.size() == a.peripheral.size() + b.peripheral.size() - 2);
    CHECK(s.find_component("1:v1") == nullptr);
    CHECK(s.find_component("2:v2") == nullptr);
    CHECK(s.find_component("1:e1") != nullptr);
    CHECK(s.find_component("2:v1") != nullptr);
    s.check_invariants();

    // gluing relators identify meridians and longitudes
    const PeripheralComponent* ca = a.find_component("v1");
    const PeripheralComponent* cb = b.find_component("v2");
    std::size_t off = a.generator_names.size();
    auto shift = [&](const Word& w) {
        std::vector<Word::Letter> ls;
        for (auto l : w.letters())
            ls.push_back({l.gen + static_cast<int>(off), l.exp});
        return Word(ls);
    };
    Word mer_glue = ca->meridian.concat(shift(cb->meridian).inverse());
    Word lon_glue = ca->longitude.concat(shift(cb->longitude).inverse());
    CHECK(s.relators[s.relators.size() - 2] == mer_glue);
    CHECK(s.relators.back() == lon_glue);
}

TEST_CASE("splice rejects self gluing and unknown components")
{
    Presentation a = chainmail_presentation(parse_graph(corpus::p2_text()));
    CHECK_THROWS_AS(splice(a, "v1", a, "v2"), Error);
    Presentation b = a;
    CHECK_THROWS_AS(splice(a, "zzz", b, "v1"), Error);
    CHECK_THROWS_AS(splice(a, "v1", b, "zzz"), Error);
}

TEST_CASE("splice then fill behaves like a single presentation")
{
    Presentation a = chainmail_presentation(parse_graph(corpus::p2_text()));
    Presentation b = chainmail_presentation(parse_graph(corpus::p2_text()));
    Presentation s = splice(a, "v1", b, "v1");
    Presentation f = dehn_fill(s, "1:e1", Slope(-1, 1));
    CHECK(f.find_component("1:e1") == nullptr);
    CHECK(unfill(f, "1:e1").serialize() == s.serialize());
}

TEST_CASE("homology of a splice adds free ranks minus the glued torus")
{
    // two P2 exteriors glued along a torus: each H1 is Z^3 and the torus
    // image has rank 2 (meridian and longitude stay independent), so
    // Mayer-Vietoris gives rank 3+3-2
    Presentation a = chainmail_presentation(parse_graph(corpus::p2_text()));
    Presentation b = chainmail_presentation(parse_graph(corpus::p2_text()));
    H1Invariants h = h1_invariants(splice(a, "v1", b, "v1"));
    CHECK(h.betti == 4);
    CHECK(h.torsion.empty());
}
