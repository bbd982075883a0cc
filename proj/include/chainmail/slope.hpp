#pragma once

#include <string>

#include "chainmail/base.hpp"

namespace chainmail {

// A surgery slope [p:q], stored reduced with q >= 0 and p = 1 when q = 0.
// The numeric value is p/q (infinity when q = 0): [p:q] labels the peripheral
// curve mu^p la^q, so slope 0 is the longitude and slope infinity the meridian.
class Slope {
public:
    Slope(long long p, long long q);

    long long p() const { return p_; }
    long long q() const { return q_; }
    bool is_infinity() const { return q_ == 0; }
    bool is_zero() const { return p_ == 0; }

    // sign(p*q): negative slopes have value < 0, the zero slope and the
    // meridian slope both have sign 0.
    int sign() const;

    Rat value() const; // throws on infinity

    std::string str() const;
    static Slope parse(const std::string& text);

    bool operator==(const Slope& o) const { return p_ == o.p_ && q_ == o.q_; }
    bool operator!=(const Slope& o) const { return !(*this == o); }

private:
    long long p_, q_;
};

} // namespace chainmail
