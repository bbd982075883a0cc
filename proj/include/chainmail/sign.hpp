#pragma once

#include <string>

#include "chainmail/base.hpp"

namespace chainmail {

// Position of a group element relative to 1 under a left total preorder.
// RES: g <= 1 and 1 <= g both hold (g is in the residue group).
// POS: g <= 1 fails (so 1 <= g holds by totality).
// NEG: 1 <= g fails.
enum class SignClass { RES, POS, NEG };

inline const char* sign_name(SignClass s)
{
    switch (s) {
    case SignClass::RES:
        return "RES";
    case SignClass::POS:
        return "POS";
    case SignClass::NEG:
        return "NEG";
    }
    return "?";
}

inline SignClass parse_sign(const std::string& s)
{
    if (s == "RES")
        return SignClass::RES;
    if (s == "POS")
        return SignClass::POS;
    if (s == "NEG")
        return SignClass::NEG;
    throw Error("bad sign class '" + s + "'");
}

} // namespace chainmail
