#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chainmail/orderability.hpp"
#include "chainmail/surgery.hpp"
#include "corpus.hpp"

using namespace chainmail;

namespace {

Presentation free_group(int n)
{
    Presentation p;
    for (int i = 0; i < n; ++i)
        p.generator_names.push_back(std::string(1, static_cast<char>('a' + i)));
    return p;
}

Presentation cyclic(int n)
{
    Presentation p = free_group(1);
    p.relators.push_back(Word::generator(0).power(n));
    return p;
}

Presentation z2()
{
    Presentation p = free_group(2);
    Word a = Word::generator(0), b = Word::generator(1);
    p.relators.push_back(a.concat(b).concat(a.inverse()).concat(b.inverse()));
    return p;
}

ConstraintSet properness_only(const Presentation& p)
{
    ConstraintSet cs;
    for (std::size_t i = 0; i < p.generator_names.size(); ++i)
        cs.properness_witnesses.push_back(Word::generator(static_cast<int>(i)));
    return cs;
}

} // namespace

TEST_CASE("candidate lines for the unit box")
{
    auto lines = candidate_lines(1);
    // 4 lattice directions (infinity, 1, 0, -1) with a gap after each
    REQUIRE(lines.size() == 8);
    CHECK(lines[0].lattice);
    CHECK(lines[0].x == 1);
    CHECK(lines[0].y == 0);
    CHECK_FALSE(lines[1].lattice); // gap above slope 1
    CHECK(lines[2].lattice);
    CHECK(lines[2].x == 1);
    CHECK(lines[2].y == 1);
    CHECK(lines[4].lattice);
    CHECK(lines[4].x == 0);
    CHECK(lines[4].y == 1);
    CHECK(lines[6].lattice);
    CHECK(lines[6].x == -1);
    CHECK(lines[6].y == 1);
    // the gap between slopes 0 and -1 covers exactly that open interval
    CHECK(lines[5].lo == Rat(-1));
    CHECK(lines[5].hi == Rat(0));
    for (const auto& l : lines)
        CHECK((l.y > 0 || (l.y == 0 && l.x == 1)));
}

TEST_CASE("slope read-off from linear sign assignments")
{
    // signs of the functional q: the p-axis separates, slope infinity
    auto by_q = [](long long, long long q) {
        return q == 0 ? SignClass::RES : (q > 0 ? SignClass::POS : SignClass::NEG);
    };
    for (long long n : {1, 2, 3}) {
        Z2Detection d = detect_slope_z2(n, by_q);
        CHECK_FALSE(d.all_residue);
        CHECK(d.slopes == SlopeSet::point(Slope(1, 0)));
    }

    // signs of p + 2q: the kernel line carries direction (-2,1), slope -2.
    // The unit box cannot separate it from nearby candidates, the 2-box can.
    auto f = [](long long p, long long q) {
        long long v = p + 2 * q;
        return v == 0 ? SignClass::RES : (v > 0 ? SignClass::POS : SignClass::NEG);
    };
    Z2Detection d1 = detect_slope_z2(1, f);
    CHECK(d1.slopes.contains(Slope(-2, 1)));
    Z2Detection d2 = detect_slope_z2(2, f);
    CHECK(d2.slopes == SlopeSet::point(Slope(-2, 1)));

    // everything residual
    Z2Detection dr = detect_slope_z2(1, [](long long, long long) { return SignClass::RES; });
    CHECK(dr.all_residue);
    CHECK(dr.slopes.covers_projective_line());
}

TEST_CASE("detect_slope_z2 rejects bad assignments")
{
    // flip symmetry violated
    CHECK_THROWS_AS(detect_slope_z2(1, [](long long, long long) { return SignClass::POS; }),
                    Error);
    // no separating line: positive on the axes, negative in between
    auto chaotic = [](long long p, long long q) {
        if (p == 0 || q == 0)
            return p + q > 0 ? SignClass::POS : SignClass::NEG;
        if (p > 0)
            return q > 0 ? SignClass::NEG : SignClass::POS;
        return q > 0 ? SignClass::NEG : SignClass::POS;
    };
    CHECK_THROWS_AS(detect_slope_z2(1, chaotic), Error);
}

TEST_CASE("words_up_to counts and order")
{
    Presentation p = free_group(2);
    auto w1 = words_up_to(p, 1);
    CHECK(w1.size() == 5); // 1, a, a^-1, b, b^-1
    CHECK(w1[0].empty());
    auto w2 = words_up_to(p, 2);
    CHECK(w2.size() == 17); // 5 + 12 reduced length-2 words
    for (std::size_t i = 1; i < w2.size(); ++i)
        CHECK(w2[i - 1] < w2[i]);
}

TEST_CASE("instantiating a full slope set adds nothing")
{
    ConstraintSet cs;
    instantiate_weak_detection(cs, Word::generator(0), Word::generator(1),
                               SlopeSet::everything(), {Word()}, 1);
    CHECK(cs.weak.empty());
    CHECK_THROWS_AS(instantiate_weak_detection(cs, Word::generator(0), Word::generator(1),
                                               SlopeSet::empty(), {Word()}, 1),
                    Error);
}

TEST_CASE("strong constraints enumerate conjugated lattice pairs")
{
    ConstraintSet cs;
    Word a = Word::generator(0), b = Word::generator(1), c = Word::generator(2);
    instantiate_strong_detection(cs, a, b, Slope(1, 1), {Word(), c});
    REQUIRE(cs.strong.size() == 2);
    CHECK(cs.strong[0].word == a.concat(b));
    CHECK(cs.strong[1].word == a.concat(b).conjugate(c));
}

TEST_CASE("orderable groups survive the search")
{
    RefuteOptions opts;
    opts.max_nodes = 1000000;
    for (std::size_t radius = 1; radius <= 4; ++radius) {
        Presentation z = cyclic(0);
        RefuteResult rz = refute(z, properness_only(z), radius, opts);
        CHECK(rz.kind == RefuteResult::Unknown);

        Presentation zz = z2();
        RefuteResult rzz = refute(zz, properness_only(zz), radius, opts);
        CHECK(rzz.kind == RefuteResult::Unknown);

        Presentation f2 = free_group(2);
        RefuteResult rf = refute(f2, properness_only(f2), radius, opts);
        CHECK(rf.kind == RefuteResult::Unknown);
    }
}

TEST_CASE("finite cyclic groups are refuted with checkable certificates")
{
    for (int p : {2, 3, 5}) {
        Presentation pres = cyclic(p);
        ConstraintSet cs = properness_only(pres);
        RefuteResult r = refute(pres, cs, static_cast<std::size_t>(p));
        REQUIRE(r.kind == RefuteResult::Refuted);
        std::string why;
        CHECK(check_refutation(pres, cs, *r.certificate, &why));
        CHECK(why.empty());
    }
}

TEST_CASE("certificate structure for the three-case analysis of Z/3")
{
    Presentation pres = cyclic(3);
    ConstraintSet cs = properness_only(pres);
    RefuteResult r = refute(pres, cs, 3);
    REQUIRE(r.kind == RefuteResult::Refuted);
    // the root branches some word into RES, POS, NEG children
    const CertNode& root = *r.certificate;
    REQUIRE_FALSE(root.leaf);
    for (int i = 0; i < 3; ++i)
        CHECK(root.kids[i] != nullptr);
}

TEST_CASE("weak detection rules can force a refutation")
{
    // in Z^2 with a residual meridian, slope 0 cannot be weakly detected:
    // both sides of its line mix signs of the longitude power
    Presentation pres = z2();
    Word a = Word::generator(0), b = Word::generator(1);
    ConstraintSet cs;
    cs.properness_witnesses = {a, b};
    cs.strong.push_back({a});
    instantiate_weak_detection(cs, a, b, SlopeSet::point(Slope(0, 1)), {Word()}, 1);
    RefuteResult r = refute(pres, cs, 2);
    REQUIRE(r.kind == RefuteResult::Refuted);
    CHECK(check_refutation(pres, cs, *r.certificate));

    // the meridian slope, by contrast, is weakly detected by ordering along b
    ConstraintSet cs2;
    cs2.properness_witnesses = {a, b};
    cs2.strong.push_back({a});
    instantiate_weak_detection(cs2, a, b, SlopeSet::point(Slope(1, 0)), {Word()}, 1);
    RefuteResult r2 = refute(pres, cs2, 2);
    CHECK(r2.kind == RefuteResult::Unknown);
}

TEST_CASE("certificate text round trip")
{
    Presentation pres = cyclic(3);
    ConstraintSet cs = properness_only(pres);
    RefuteResult r = refute(pres, cs, 3);
    REQUIRE(r.kind == RefuteResult::Refuted);
    std::string text = write_refutation(pres, *r.certificate);
    auto back = parse_refutation(pres, text);
    CHECK(write_refutation(pres, *back) == text);
    CHECK(check_refutation(pres, cs, *back));
    CHECK_THROWS_AS(parse_refutation(pres, text + "garbage\n"), Error);
}

TEST_CASE("tampered certificates are rejected")
{
    Presentation pres = cyclic(3);
    ConstraintSet cs = properness_only(pres);
    RefuteResult r = refute(pres, cs, 3);
    REQUIRE(r.kind == RefuteResult::Refuted);

    // drop a child
    {
        auto c = parse_refutation(pres, write_refutation(pres, *r.certificate));
        CertNode* n = c.get();
        while (n->leaf == false && n->kids[0])
            n = n->kids[0].get();
        REQUIRE(n != c.get());
        // find its parent and cut the branch
        CertNode* par = c.get();
        while (par->kids[0].get() != n)
            par = par->kids[0].get();
        par->kids[0].reset();
        CHECK_FALSE(check_refutation(pres, cs, *c));
    }
    // swap a leaf rule for a different one
    {
        auto c = parse_refutation(pres, write_refutation(pres, *r.certificate));
        std::function<bool(CertNode&)> clobber = [&](CertNode& n) {
            if (n.leaf) {
                n.rule = "properness";
                n.args.clear();
                return true;
            }
            for (auto& k : n.kids)
                if (k && clobber(*k))
                    return true;
            return false;
        };
        REQUIRE(clobber(*c));
        CHECK_FALSE(check_refutation(pres, cs, *c));
    }
    // wrong constraint set: the certificate must not check against a group
    // with no relators
    {
        Presentation freep = free_group(1);
        ConstraintSet csf = properness_only(freep);
        CHECK_FALSE(check_refutation(freep, csf, *r.certificate));
    }
}

TEST_CASE("constraints from a fully filled presentation")
{
    Presentation p = chainmail_presentation(parse_graph(corpus::p2_text()));
    p = dehn_fill(p, "e1", Slope(-1, 1));
    p = dehn_fill(p, "v1", Slope(1, 1));
    p = dehn_fill(p, "v2", Slope(1, 1));
    ConstraintSet cs = constraints_from_filled(p, 1);
    CHECK(cs.properness_witnesses.size() == p.generator_names.size());
    CHECK_FALSE(cs.strong.empty());
    CHECK_FALSE(cs.weak.empty());
    // every weak fragment singles out the filled slope
    for (const auto& f : cs.weak)
        CHECK_FALSE(f.slopes.covers_projective_line());
}
