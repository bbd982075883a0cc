#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chainmail/slope.hpp"

namespace chainmail {

// Finite union of intervals on the projective line of slope values.
// The line is cut at the point at infinity: membership of infinity is a flag,
// and the affine part is a sorted list of disjoint maximal intervals with
// rational endpoints.  Unbounded endpoints are always open (infinity itself is
// never inside an affine interval).  Isolated points are degenerate closed
// intervals.
class SlopeSet {
public:
    struct Interval {
        std::optional<Rat> lo, hi; // nullopt = unbounded
        bool lo_open = true, hi_open = true;
    };

    SlopeSet() = default;

    static SlopeSet empty();
    static SlopeSet everything();
    static SlopeSet negatives(); // value in (-inf, 0)
    static SlopeSet positives(); // value in (0, +inf)
    static SlopeSet point(const Slope& s);
    static SlopeSet interval(Interval iv, bool with_infinity = false);

    SlopeSet unite(const SlopeSet& other) const;
    SlopeSet complement() const;
    bool covers_projective_line() const;
    bool contains(const Slope& s) const;
    bool is_empty() const;

    // Does the set meet the open affine interval (lo, hi)?  nullopt bounds are
    // unbounded; the point at infinity never counts.
    bool meets_open(const std::optional<Rat>& lo, const std::optional<Rat>& hi) const;

    bool has_infinity() const { return has_inf_; }
    const std::vector<Interval>& parts() const { return parts_; }

    std::string str() const;
    bool operator==(const SlopeSet& o) const;

private:
    bool has_inf_ = false;
    std::vector<Interval> parts_;

    void canonicalize();
};

} // namespace chainmail
