#include "chainmail/word.hpp"

#include <algorithm>
#include <sstream>

namespace chainmail {

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters))
{
    reduce();
}

Word Word::generator(int gen, long long exp)
{
    Word w;
    if (exp != 0)
        w.letters_.push_back({gen, exp});
    return w;
}

void Word::reduce()
{
    std::vector<Letter> out;
    for (const auto& l : letters_) {
        if (l.exp == 0)
            continue;
        if (!out.empty() && out.back().gen == l.gen) {
            out.back().exp += l.exp;
            if (out.back().exp == 0)
                out.pop_back();
        } else {
            out.push_back(l);
        }
    }
    letters_ = std::move(out);
}

std::size_t Word::length() const
{
    std::size_t n = 0;
    for (const auto& l : letters_)
        n += static_cast<std::size_t>(l.exp < 0 ? -l.exp : l.exp);
    return n;
}

Word Word::inverse() const
{
    Word w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
        w.letters_.push_back({it->gen, -it->exp});
    return w;
}

Word Word::concat(const Word& other) const
{
    Word w;
    w.letters_ = letters_;
    w.letters_.insert(w.letters_.end(), other.letters_.begin(), other.letters_.end());
    w.reduce();
    return w;
}

Word Word::power(long long n) const
{
    if (n == 0)
        return Word{};
    Word base = n > 0 ? *this : inverse();
    long long k = n > 0 ? n : -n;
    // a single-letter word gets a single letter with a big exponent
    if (base.letters_.size() == 1) {
        Word w;
        w.letters_.push_back({base.letters_[0].gen, base.letters_[0].exp * k});
        return w;
    }
    Word w;
    for (long long i = 0; i < k; ++i)
        w = w.concat(base);
    return w;
}

Word Word::conjugate(const Word& by) const
{
    return by.concat(*this).concat(by.inverse());
}

std::vector<long long> Word::exponent_sums(std::size_t ngens) const
{
    std::vector<long long> sums(ngens, 0);
    for (const auto& l : letters_)
        sums[static_cast<std::size_t>(l.gen)] += l.exp;
    return sums;
}

Word Word::insert_at(std::size_t pos, const Word& ins) const
{
    Word w;
    std::size_t consumed = 0;
    std::size_t i = 0;
    bool inserted = false;
    for (; i < letters_.size(); ++i) {
        std::size_t run = static_cast<std::size_t>(letters_[i].exp < 0 ? -letters_[i].exp
                                                                       : letters_[i].exp);
        if (consumed + run >= pos) {
            long long sign = letters_[i].exp < 0 ? -1 : 1;
            long long before = static_cast<long long>(pos - consumed);
            if (before > 0)
                w.letters_.push_back({letters_[i].gen, sign * before});
            w.letters_.insert(w.letters_.end(), ins.letters_.begin(), ins.letters_.end());
            long long after = static_cast<long long>(run) - before;
            if (after > 0)
                w.letters_.push_back({letters_[i].gen, sign * after});
            inserted = true;
            ++i;
            break;
        }
        consumed += run;
        w.letters_.push_back(letters_[i]);
    }
    if (!inserted) {
        if (consumed < pos)
            throw Error("insertion position past end of word");
        w.letters_.insert(w.letters_.end(), ins.letters_.begin(), ins.letters_.end());
    }
    for (; i < letters_.size(); ++i)
        w.letters_.push_back(letters_[i]);
    w.reduce();
    return w;
}

bool Word::operator<(const Word& o) const
{
    std::size_t la = length(), lb = o.length();
    if (la != lb)
        return la < lb;
    // lexicographic on (gen, sign) letter by letter; positive before negative
    auto expand_cmp = [](const Word& x, const Word& y) {
        std::size_t i = 0, j = 0;
        long long ri = 0, rj = 0;
        while (i < x.letters_.size() && j < y.letters_.size()) {
            const Letter &a = x.letters_[i], &b = y.letters_[j];
            if (a.gen != b.gen)
                return a.gen < b.gen ? -1 : 1;
            int sa = a.exp < 0 ? 1 : 0, sb = b.exp < 0 ? 1 : 0;
            if (sa != sb)
                return sa < sb ? -1 : 1;
            long long na = (a.exp < 0 ? -a.exp : a.exp) - ri;
            long long nb = (b.exp < 0 ? -b.exp : b.exp) - rj;
            if (na == nb) {
                ++i, ++j;
                ri = rj = 0;
            } else if (na < nb) {
                ++i;
                ri = 0;
                rj += na;
            } else {
                ++j;
                rj = 0;
                ri += nb;
            }
        }
        return 0; // same length, both exhausted together
    };
    return expand_cmp(*this, o) < 0;
}

std::string Word::str(const std::vector<std::string>& names) const
{
    if (letters_.empty())
        return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& l : letters_) {
        if (!first)
            os << " ";
        first = false;
        os << names.at(static_cast<std::size_t>(l.gen));
        if (l.exp != 1)
            os << "^" << l.exp;
    }
    return os.str();
}

Word Word::parse(const std::string& text, const std::vector<std::string>& names)
{
    std::istringstream is(text);
    std::string tok;
    std::vector<Letter> letters;
    while (is >> tok) {
        if (tok == "1" && letters.empty() && is.peek() == EOF)
            break;
        auto caret = tok.rfind('^');
        std::string name = tok;
        long long exp = 1;
        if (caret != std::string::npos) {
            name = tok.substr(0, caret);
            try {
                exp = std::stoll(tok.substr(caret + 1));
            } catch (const std::logic_error&) {
                throw Error("bad exponent in '" + tok + "'");
            }
            if (exp == 0)
                throw Error("zero exponent in '" + tok + "'");
        }
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw Error("unknown generator '" + name + "'");
        letters.push_back({static_cast<int>(it - names.begin()), exp});
    }
    return Word(std::move(letters));
}

std::string Word::key() const
{
    std::ostringstream os;
    for (const auto& l : letters_)
        os << l.gen << "^" << l.exp << ".";
    return os.str();
}

} // namespace chainmail
