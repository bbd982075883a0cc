#pragma once

#include <string>
#include <vector>

#include "chainmail/base.hpp"

namespace chainmail {

// Freely reduced word over numbered generators.  Adjacent letters always have
// distinct generators and nonzero exponents; the empty word is the identity.
class Word {
public:
    struct Letter {
        int gen;
        long long exp;
        bool operator==(const Letter& o) const { return gen == o.gen && exp == o.exp; }
    };

    Word() = default;
    explicit Word(std::vector<Letter> letters); // reduces

    static Word generator(int gen, long long exp = 1);

    bool empty() const { return letters_.empty(); }
    const std::vector<Letter>& letters() const { return letters_; }

    // total letter count with multiplicity
    std::size_t length() const;

    Word inverse() const;
    Word concat(const Word& other) const;
    Word power(long long n) const;
    Word conjugate(const Word& by) const; // by * this * by^-1

    // exponent sum per generator (size = ngens)
    std::vector<long long> exponent_sums(std::size_t ngens) const;

    // insert `ins` after `pos` single letters of this word, then reduce
    Word insert_at(std::size_t pos, const Word& ins) const;

    bool operator==(const Word& o) const { return letters_ == o.letters_; }
    bool operator!=(const Word& o) const { return !(*this == o); }
    bool operator<(const Word& o) const; // shortlex on expanded letters

    // text form over generator display names: "a^2 b^-1"; empty word is "1"
    std::string str(const std::vector<std::string>& names) const;
    static Word parse(const std::string& text, const std::vector<std::string>& names);

    // stable key for hashing/interning
    std::string key() const;

private:
    std::vector<Letter> letters_;

    void reduce();
};

} // namespace chainmail
