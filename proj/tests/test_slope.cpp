#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chainmail/slope_set.hpp"

using namespace chainmail;

TEST_CASE("slope canonical form")
{
    CHECK(Slope(2, 4) == Slope(1, 2));
    CHECK(Slope(-2, -4) == Slope(1, 2));
    CHECK(Slope(2, -4) == Slope(-1, 2));
    CHECK(Slope(3, 0) == Slope(1, 0));
    CHECK(Slope(-5, 0) == Slope(1, 0));
    CHECK(Slope(0, 7) == Slope(0, 1));
    CHECK_THROWS_AS(Slope(0, 0), Error);
}

TEST_CASE("slope accessors")
{
    CHECK(Slope(1, 0).is_infinity());
    CHECK(Slope(0, 1).is_zero());
    CHECK(Slope(-3, 2).sign() < 0);
    CHECK(Slope(3, 2).sign() > 0);
    CHECK(Slope(0, 1).sign() == 0);
    CHECK(Slope(1, 0).sign() == 0);
    CHECK(Slope(3, 2).value() == Rat(3) / 2);
    CHECK_THROWS_AS(Slope(1, 0).value(), Error);
}

TEST_CASE("slope text round trip")
{
    for (const char* s : {"1/0", "0/1", "3/2", "-5/3"}) {
        Slope sl = Slope::parse(s);
        CHECK(sl.str() == s);
        CHECK(Slope::parse(sl.str()) == sl);
    }
    CHECK_THROWS_AS(Slope::parse("x"), Error);
    CHECK_THROWS_AS(Slope::parse("0/0"), Error);
}

TEST_CASE("slope set builders and membership")
{
    SlopeSet neg = SlopeSet::negatives(), pos = SlopeSet::positives();
    CHECK(neg.contains(Slope(-1, 2)));
    CHECK_FALSE(neg.contains(Slope(1, 2)));
    CHECK_FALSE(neg.contains(Slope(0, 1)));
    CHECK_FALSE(neg.contains(Slope(1, 0)));
    CHECK(pos.contains(Slope(7, 2)));
    CHECK(SlopeSet::everything().contains(Slope(1, 0)));
    CHECK(SlopeSet::point(Slope(1, 0)).contains(Slope(1, 0)));
    CHECK(SlopeSet::empty().is_empty());
}

TEST_CASE("union and complement")
{
    SlopeSet neg = SlopeSet::negatives(), pos = SlopeSet::positives();
    CHECK_FALSE(neg.unite(pos).covers_projective_line());
    SlopeSet rest = SlopeSet::point(Slope(0, 1)).unite(SlopeSet::point(Slope(1, 0)));
    CHECK(neg.unite(pos).unite(rest).covers_projective_line());
    CHECK(neg.complement().unite(neg).covers_projective_line());
    // complement of a point: two open rays plus infinity
    SlopeSet c = SlopeSet::point(Slope(0, 1)).complement();
    CHECK(c.has_infinity());
    CHECK(c.parts().size() == 2);
    CHECK_FALSE(c.contains(Slope(0, 1)));
    CHECK(c.contains(Slope(1, 5)));
    // nonnegative-with-infinity joins negatives to cover
    SlopeSet nn = pos.unite(rest);
    CHECK(nn.unite(neg).covers_projective_line());
}

TEST_CASE("meets_open")
{
    SlopeSet pos = SlopeSet::positives();
    CHECK(pos.meets_open(Rat(0), Rat(1)));
    CHECK(pos.meets_open(std::nullopt, std::nullopt));
    CHECK_FALSE(pos.meets_open(std::nullopt, Rat(0)));
    CHECK_FALSE(SlopeSet::point(Slope(1, 0)).meets_open(std::nullopt, std::nullopt));
    CHECK(SlopeSet::point(Slope(2, 1)).meets_open(Rat(1), Rat(3)));
    CHECK_FALSE(SlopeSet::point(Slope(2, 1)).meets_open(Rat(2), Rat(3)));
}

TEST_CASE("adjacent intervals merge")
{
    SlopeSet::Interval a{std::nullopt, Rat(0), true, false};
    SlopeSet::Interval b{Rat(0), std::nullopt, true, true};
    SlopeSet u = SlopeSet::interval(a).unite(SlopeSet::interval(b));
    CHECK(u.parts().size() == 1);
    CHECK(u.contains(Slope(0, 1)));
    CHECK_FALSE(u.has_infinity());
    CHECK(u.unite(SlopeSet::point(Slope(1, 0))).covers_projective_line());
}
