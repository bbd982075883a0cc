#include "chainmail/slope_set.hpp"

#include <algorithm>
#include <sstream>

namespace chainmail {

namespace {

// true if the interval contains no rational at all
bool interval_empty(const SlopeSet::Interval& iv)
{
    if (!iv.lo || !iv.hi)
        return false;
    if (*iv.lo < *iv.hi)
        return false;
    if (*iv.lo > *iv.hi)
        return true;
    return iv.lo_open || iv.hi_open;
}

bool lo_less(const SlopeSet::Interval& a, const SlopeSet::Interval& b)
{
    if (!a.lo)
        return b.lo.has_value();
    if (!b.lo)
        return false;
    if (*a.lo != *b.lo)
        return *a.lo < *b.lo;
    return !a.lo_open && b.lo_open; // closed end starts earlier
}

// can b be merged into a, assuming a.lo <= b.lo?
bool touches(const SlopeSet::Interval& a, const SlopeSet::Interval& b)
{
    if (!a.hi)
        return true;
    if (!b.lo)
        return true;
    if (*b.lo < *a.hi)
        return true;
    if (*b.lo > *a.hi)
        return false;
    return !(a.hi_open && b.lo_open);
}

} // namespace

void SlopeSet::canonicalize()
{
    parts_.erase(std::remove_if(parts_.begin(), parts_.end(), interval_empty), parts_.end());
    std::sort(parts_.begin(), parts_.end(), lo_less);
    std::vector<Interval> out;
    for (const auto& iv : parts_) {
        if (!out.empty() && touches(out.back(), iv)) {
            Interval& a = out.back();
            if (a.hi) {
                if (!iv.hi) {
                    a.hi.reset();
                    a.hi_open = true;
                } else if (*iv.hi > *a.hi || (*iv.hi == *a.hi && !iv.hi_open)) {
                    a.hi = iv.hi;
                    a.hi_open = iv.hi_open;
                }
            }
        } else {
            out.push_back(iv);
        }
    }
    parts_ = std::move(out);
}

SlopeSet SlopeSet::empty()
{
    return SlopeSet{};
}

SlopeSet SlopeSet::everything()
{
    SlopeSet s;
    s.has_inf_ = true;
    s.parts_.push_back(Interval{});
    return s;
}

SlopeSet SlopeSet::negatives()
{
    Interval iv;
    iv.hi = Rat(0);
    iv.hi_open = true;
    return interval(iv);
}

SlopeSet SlopeSet::positives()
{
    Interval iv;
    iv.lo = Rat(0);
    iv.lo_open = true;
    return interval(iv);
}

SlopeSet SlopeSet::point(const Slope& s)
{
    SlopeSet out;
    if (s.is_infinity()) {
        out.has_inf_ = true;
    } else {
        Interval iv;
        iv.lo = iv.hi = s.value();
        iv.lo_open = iv.hi_open = false;
        out.parts_.push_back(iv);
    }
    return out;
}

SlopeSet SlopeSet::interval(Interval iv, bool with_infinity)
{
    SlopeSet out;
    out.has_inf_ = with_infinity;
    out.parts_.push_back(iv);
    out.canonicalize();
    return out;
}

SlopeSet SlopeSet::unite(const SlopeSet& other) const
{
    SlopeSet out;
    out.has_inf_ = has_inf_ || other.has_inf_;
    out.parts_ = parts_;
    out.parts_.insert(out.parts_.end(), other.parts_.begin(), other.parts_.end());
    out.canonicalize();
    return out;
}

SlopeSet SlopeSet::complement() const
{
    SlopeSet out;
    out.has_inf_ = !has_inf_;
    // sweep the affine line; parts_ are sorted and disjoint
    std::optional<Rat> cursor;  // lower bound of the gap being built
    bool cursor_open = true;    // gap is open at cursor?
    for (const auto& iv : parts_) {
        Interval gap;
        gap.lo = cursor;
        gap.lo_open = cursor_open;
        gap.hi = iv.lo;
        gap.hi_open = !iv.lo_open;
        if (iv.lo)
            out.parts_.push_back(gap);
        else if (cursor)
            throw Error("non-canonical slope set");
        cursor = iv.hi;
        cursor_open = !iv.hi_open;
        if (!iv.hi) {
            out.canonicalize();
            return out; // unbounded above: nothing after
        }
    }
    Interval tail;
    tail.lo = cursor;
    tail.lo_open = cursor_open;
    out.parts_.push_back(tail);
    out.canonicalize();
    return out;
}

bool SlopeSet::covers_projective_line() const
{
    if (!has_inf_)
        return false;
    return parts_.size() == 1 && !parts_[0].lo && !parts_[0].hi;
}

bool SlopeSet::contains(const Slope& s) const
{
    if (s.is_infinity())
        return has_inf_;
    Rat v = s.value();
    for (const auto& iv : parts_) {
        if (iv.lo) {
            if (v < *iv.lo || (v == *iv.lo && iv.lo_open))
                continue;
        }
        if (iv.hi) {
            if (v > *iv.hi || (v == *iv.hi && iv.hi_open))
                continue;
        }
        return true;
    }
    return false;
}

bool SlopeSet::is_empty() const
{
    return !has_inf_ && parts_.empty();
}

bool SlopeSet::meets_open(const std::optional<Rat>& lo, const std::optional<Rat>& hi) const
{
    for (const auto& iv : parts_) {
        // does (lo,hi) intersect iv?
        bool below = hi && iv.lo && (*hi < *iv.lo || (*hi == *iv.lo && iv.lo_open));
        bool above = lo && iv.hi && (*lo > *iv.hi || (*lo == *iv.hi && iv.hi_open));
        if (below || above)
            continue;
        // degenerate touch: iv = [a,a] with a == lo or a == hi is excluded by
        // openness of the query interval
        if (iv.lo && iv.hi && *iv.lo == *iv.hi) {
            if ((lo && *iv.lo == *lo) || (hi && *iv.lo == *hi))
                continue;
        }
        return true;
    }
    return false;
}

std::string SlopeSet::str() const
{
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
        if (!first)
            os << "u";
        first = false;
    };
    for (const auto& iv : parts_) {
        sep();
        if (iv.lo && iv.hi && *iv.lo == *iv.hi) {
            os << "{" << iv.lo->str() << "}";
            continue;
        }
        os << (iv.lo_open ? "(" : "[");
        if (iv.lo)
            os << iv.lo->str();
        else
            os << "-inf";
        os << ",";
        if (iv.hi)
            os << iv.hi->str();
        else
            os << "+inf";
        os << (iv.hi_open ? ")" : "]");
    }
    if (has_inf_) {
        sep();
        os << "{inf}";
    }
    if (first)
        os << "{}";
    return os.str();
}

bool SlopeSet::operator==(const SlopeSet& o) const
{
    if (has_inf_ != o.has_inf_ || parts_.size() != o.parts_.size())
        return false;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        const auto &a = parts_[i], &b = o.parts_[i];
        if (a.lo != b.lo || a.hi != b.hi)
            return false;
        if ((a.lo && a.lo_open != b.lo_open) || (a.hi && a.hi_open != b.hi_open))
            return false;
    }
    return true;
}

} // namespace chainmail
