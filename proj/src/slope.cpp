#include "chainmail/slope.hpp"

#include <numeric>

namespace chainmail {

Slope::Slope(long long p, long long q) : p_(p), q_(q)
{
    if (p_ == 0 && q_ == 0)
        throw Error("slope [0:0] is not a projective point");
    long long g = std::gcd(p_ < 0 ? -p_ : p_, q_ < 0 ? -q_ : q_);
    p_ /= g;
    q_ /= g;
    if (q_ < 0) {
        p_ = -p_;
        q_ = -q_;
    }
    if (q_ == 0)
        p_ = 1;
}

int Slope::sign() const
{
    long long s = p_ * q_;
    return s > 0 ? 1 : s < 0 ? -1 : 0;
}

Rat Slope::value() const
{
    if (is_infinity())
        throw Error("slope 1/0 has no finite value");
    return Rat(p_, q_);
}

std::string Slope::str() const
{
    return std::to_string(p_) + "/" + std::to_string(q_);
}

Slope Slope::parse(const std::string& text)
{
    auto bar = text.find('/');
    try {
        if (bar == std::string::npos)
            return Slope(std::stoll(text), 1);
        return Slope(std::stoll(text.substr(0, bar)), std::stoll(text.substr(bar + 1)));
    } catch (const std::logic_error&) {
        throw Error("bad slope '" + text + "'");
    }
}

} // namespace chainmail
