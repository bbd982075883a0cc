#include "chainmail/orderability.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace chainmail {

namespace {

SignClass flip(SignClass s)
{
    if (s == SignClass::POS)
        return SignClass::NEG;
    if (s == SignClass::NEG)
        return SignClass::POS;
    return SignClass::RES;
}

// Sign-class product table of a left total preorder: u >= 1 and v >= 1 force
// uv >= 1, and residual factors preserve the other side.
bool product_consistent(SignClass a, SignClass b, SignClass c)
{
    if (a == SignClass::RES && b == SignClass::RES)
        return c == SignClass::RES;
    bool a_ge = a != SignClass::NEG, b_ge = b != SignClass::NEG;
    bool a_le = a != SignClass::POS, b_le = b != SignClass::POS;
    if (a_ge && b_ge)
        return c == SignClass::POS;
    if (a_le && b_le)
        return c == SignClass::NEG;
    return true;
}

int side_sign(long long p, long long q, long long x, long long y)
{
    long long s = p * y - q * x;
    return s > 0 ? 1 : s < 0 ? -1 : 0;
}

} // namespace

std::vector<LineCandidate> candidate_lines(long long n)
{
    if (n < 1)
        throw Error("box radius must be at least 1");
    // primitive directions (x, y) with y > 0, plus (1, 0) for infinity
    std::vector<std::pair<long long, long long>> dirs{{1, 0}};
    for (long long y = 1; y <= n; ++y)
        for (long long x = -n; x <= n; ++x)
            if (std::gcd(x < 0 ? -x : x, y) == 1)
                dirs.push_back({x, y});
    // decreasing slope value, infinity first
    std::sort(dirs.begin(), dirs.end(), [](const auto& a, const auto& b) {
        if (a.second == 0 || b.second == 0)
            return b.second != 0; // only infinity compares greater
        return Rat(a.first, a.second) > Rat(b.first, b.second);
    });
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());

    std::vector<LineCandidate> out;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        auto [x, y] = dirs[i];
        out.push_back({x, y, true, std::nullopt, std::nullopt});
        LineCandidate gap;
        gap.lattice = false;
        if (i + 1 < dirs.size()) {
            auto [x2, y2] = dirs[i + 1];
            gap.x = x + x2; // mediant: strictly between the two values
            gap.y = y + y2;
            gap.lo = Rat(x2, y2);
            gap.hi = y == 0 ? std::optional<Rat>{} : Rat(x, y);
        } else {
            // below the most negative direction, up to infinity
            gap.x = x - 1;
            gap.y = y;
            gap.lo = std::nullopt;
            gap.hi = Rat(x, y);
        }
        out.push_back(gap);
    }
    return out;
}

Z2Detection detect_slope_z2(long long n,
                            const std::function<SignClass(long long, long long)>& cls)
{
    bool all_res = true;
    for (long long p = -n; p <= n; ++p)
        for (long long q = -n; q <= n; ++q) {
            if (p == 0 && q == 0)
                continue;
            SignClass c = cls(p, q);
            if (cls(-p, -q) != flip(c))
                throw Error("sign map is not inverse-flip symmetric");
            if (c != SignClass::RES)
                all_res = false;
        }
    if (all_res)
        return Z2Detection{true, SlopeSet::everything()};

    SlopeSet found = SlopeSet::empty();
    for (const LineCandidate& line : candidate_lines(n)) {
        bool dead = false;
        for (int side : {1, -1}) {
            bool has_ge = false, has_neg = false;
            for (long long p = -n; p <= n && !dead; ++p)
                for (long long q = -n; q <= n; ++q) {
                    if (p == 0 && q == 0)
                        continue;
                    if (side_sign(p, q, line.x, line.y) != side)
                        continue;
                    SignClass c = cls(p, q);
                    (c == SignClass::NEG ? has_neg : has_ge) = true;
                    if (has_ge && has_neg) {
                        dead = true;
                        break;
                    }
                }
            if (dead)
                break;
        }
        if (dead)
            continue;
        if (line.lattice) {
            found = found.unite(SlopeSet::point(Slope(line.x, line.y)));
        } else {
            SlopeSet::Interval iv;
            iv.lo = line.lo;
            iv.hi = line.hi;
            found = found.unite(SlopeSet::interval(iv));
        }
    }
    if (found.is_empty())
        throw Error("no separating line is compatible with the sign map");
    return Z2Detection{false, found};
}

void instantiate_weak_detection(ConstraintSet& cs, const Word& mer, const Word& lon,
                                const SlopeSet& slopes, const std::vector<Word>& conjugators,
                                long long box_n)
{
    if (slopes.is_empty())
        throw Error("weak detection over an empty slope set");
    if (slopes.covers_projective_line())
        return; // some slope is always weakly detected
    auto lines = candidate_lines(box_n);
    for (const Word& c : conjugators) {
        WeakFragment f;
        f.mer = mer;
        f.lon = lon;
        f.conjugator = c;
        f.slopes = slopes;
        for (long long p = -box_n; p <= box_n; ++p)
            for (long long q = -box_n; q <= box_n; ++q) {
                if (p == 0 && q == 0)
                    continue;
                f.points.push_back({p, q, mer.power(p).concat(lon.power(q)).conjugate(c)});
            }
        for (const LineCandidate& line : lines) {
            bool keep = line.lattice ? slopes.contains(Slope(line.x, line.y))
                                     : slopes.meets_open(line.lo, line.hi);
            if (!keep)
                continue;
            FragmentLine fl;
            fl.line = line;
            for (const BoxPoint& pt : f.points)
                fl.side.push_back(side_sign(pt.p, pt.q, line.x, line.y));
            f.lines.push_back(std::move(fl));
        }
        cs.weak.push_back(std::move(f));
    }
}

void instantiate_strong_detection(ConstraintSet& cs, const Word& mer, const Word& lon, Slope s,
                                  const std::vector<Word>& conjugators)
{
    Word base = mer.power(s.p()).concat(lon.power(s.q()));
    for (const Word& c : conjugators)
        cs.strong.push_back({base.conjugate(c)});
}

std::vector<Word> words_up_to(const Presentation& p, std::size_t len)
{
    int ngens = static_cast<int>(p.generator_names.size());
    std::vector<Word> out{Word{}};
    std::size_t frontier_begin = 0;
    for (std::size_t l = 1; l <= len; ++l) {
        std::size_t frontier_end = out.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i)
            for (int g = 0; g < ngens; ++g)
                for (long long e : {1ll, -1ll}) {
                    Word w = out[i].concat(Word::generator(g, e));
                    if (w.length() == l)
                        out.push_back(w);
                }
        frontier_begin = frontier_end;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ConstraintSet constraints_from_filled(const Presentation& p, std::size_t conj_len, long long box_n)
{
    ConstraintSet cs;
    cs.box_n = box_n;
    for (std::size_t g = 0; g < p.generator_names.size(); ++g)
        cs.properness_witnesses.push_back(Word::generator(static_cast<int>(g)));
    auto conjugators = words_up_to(p, conj_len);
    for (const FilledRecord& f : p.filled) {
        instantiate_strong_detection(cs, f.meridian, f.longitude, f.slope, conjugators);
        // strong detection implies weak detection of the same slope at every
        // conjugate
        instantiate_weak_detection(cs, f.meridian, f.longitude, SlopeSet::point(f.slope),
                                   conjugators, box_n);
    }
    return cs;
}

// ---------------------------------------------------------------------------
// refuter

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct RuleInst {
    enum Kind { Identity, Inverse, Product, Insert, Strong, Properness, Weak } kind;
    std::size_t a = npos, b = npos, w = npos; // word ids
    std::size_t idx = npos;                   // triple / strong / fragment / edge index
    std::vector<std::array<std::size_t, 3>> weak_lines; // (line, ge point, neg point)
};

struct Searcher {
    const Presentation& pres;
    const ConstraintSet& cs;
    RefuteOptions opts;

    std::vector<Word> words;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::size_t> uf;

    struct EdgeRec {
        std::size_t from, to, relator, pos;
        int sign;
    };
    std::vector<EdgeRec> erecs;
    std::vector<std::vector<std::size_t>> eadj;

    std::vector<std::size_t> cls_of;  // word -> class
    std::vector<std::size_t> canon;   // class -> word id
    std::vector<std::vector<std::size_t>> members;
    std::vector<std::size_t> inv_cls; // class -> class of canonical inverse
    std::vector<std::size_t> inv_word; // class -> word id of canonical inverse
    std::vector<std::size_t> class_order;

    struct Triple {
        std::size_t u, v, w;
    };
    std::vector<Triple> triples;
    std::vector<std::vector<std::size_t>> triples_by_cls;

    std::vector<std::size_t> strong_words;
    std::vector<std::size_t> witness_words;
    std::vector<std::vector<std::size_t>> frag_points; // word ids per fragment
    std::vector<std::vector<std::size_t>> frags_by_cls;

    // search state
    std::vector<int> val;        // class -> -1 or SignClass value
    std::vector<char> on_path;   // word -> emitted as a branch on the path
    std::vector<std::vector<std::size_t>> path_members; // class -> path word ids
    struct TrailItem {
        std::size_t word;
        bool class_unset;
    };
    std::vector<TrailItem> trail;

    std::size_t decisions = 0;
    bool budget_hit = false;
    bool survivor_found = false;
    std::vector<std::pair<Word, SignClass>> survivor;

    struct Pending {
        std::size_t cls;
        SignClass v;
        RuleInst why;
        std::size_t branch_word;
    };

    Searcher(const Presentation& p, const ConstraintSet& c, const RefuteOptions& o)
        : pres(p), cs(c), opts(o)
    {
    }

    // -- universe -----------------------------------------------------------

    std::size_t find(std::size_t x)
    {
        while (uf[x] != x)
            x = uf[x] = uf[uf[x]];
        return x;
    }

    std::size_t add_word(const Word& w, bool force = false)
    {
        auto it = index.find(w.key());
        if (it != index.end())
            return it->second;
        if (!force && words.size() >= opts.max_words)
            return npos;
        std::size_t id = words.size();
        words.push_back(w);
        index.emplace(words.back().key(), id);
        uf.push_back(id);
        eadj.emplace_back();
        return id;
    }

    void build(std::size_t radius)
    {
        for (const Word& w : words_up_to(pres, radius))
            add_word(w, true);
        auto seed = [&](const Word& w) {
            add_word(w, true);
            add_word(w.inverse(), true);
        };
        for (const Word& r : pres.relators)
            seed(r);
        for (const auto& s : cs.strong)
            seed(s.word);
        for (const Word& w : cs.properness_witnesses)
            seed(w);
        for (const auto& f : cs.weak)
            for (const auto& pt : f.points)
                seed(pt.word);

        std::size_t max_seed = 0, max_rel = 0;
        for (const Word& w : words)
            max_seed = std::max(max_seed, w.length());
        for (const Word& r : pres.relators)
            max_rel = std::max(max_rel, r.length());
        std::size_t cap = max_seed + max_rel + opts.scratch_slack;
        std::size_t nseeds = words.size();

        // equality closure by bounded relator insertion
        for (std::size_t id = 0; id < words.size(); ++id) {
            const std::size_t len = words[id].length();
            for (std::size_t k = 0; k < pres.relators.size(); ++k)
                for (int sgn : {1, -1}) {
                    Word rel = sgn > 0 ? pres.relators[k] : pres.relators[k].inverse();
                    for (std::size_t pos = 0; pos <= len; ++pos) {
                        Word w2 = words[id].insert_at(pos, rel);
                        std::size_t id2;
                        auto it = index.find(w2.key());
                        if (it != index.end()) {
                            id2 = it->second;
                        } else {
                            if (w2.length() > cap)
                                continue;
                            id2 = add_word(w2);
                            if (id2 == npos)
                                continue;
                        }
                        if (id2 == id)
                            continue;
                        std::size_t e = erecs.size();
                        erecs.push_back({id, id2, k, pos, sgn});
                        eadj[id].push_back(e);
                        eadj[id2].push_back(e);
                        uf[find(id)] = find(id2);
                    }
                }
        }
        // inverse closure so the flip rule always has both operands
        for (std::size_t id = 0; id < words.size(); ++id)
            add_word(words[id].inverse(), true);

        // classes
        std::map<std::size_t, std::size_t> root_to_cls;
        cls_of.resize(words.size());
        for (std::size_t id = 0; id < words.size(); ++id) {
            std::size_t r = find(id);
            auto [it, fresh] = root_to_cls.try_emplace(r, members.size());
            if (fresh)
                members.emplace_back();
            cls_of[id] = it->second;
            members[it->second].push_back(id);
        }
        canon.assign(members.size(), npos);
        for (std::size_t c = 0; c < members.size(); ++c) {
            canon[c] = members[c][0];
            for (std::size_t id : members[c])
                if (words[id] < words[canon[c]])
                    canon[c] = id;
        }
        class_order.resize(members.size());
        std::iota(class_order.begin(), class_order.end(), 0);
        std::sort(class_order.begin(), class_order.end(), [&](std::size_t a, std::size_t b) {
            return words[canon[a]] < words[canon[b]];
        });
        inv_cls.resize(members.size());
        inv_word.resize(members.size());
        for (std::size_t c = 0; c < members.size(); ++c) {
            std::size_t iw = index.at(words[canon[c]].inverse().key());
            inv_word[c] = iw;
            inv_cls[c] = cls_of[iw];
        }

        // product triples: one factor short, all factors from the seed set
        triples_by_cls.resize(members.size());
        std::set<std::array<std::size_t, 3>> seen;
        for (std::size_t a = 0; a < nseeds; ++a) {
            if (words[a].empty() || words[a].length() > opts.pair_len)
                continue;
            for (std::size_t b = 0; b < nseeds; ++b) {
                if (words[b].empty())
                    continue;
                for (bool swap : {false, true}) {
                    std::size_t u = swap ? b : a, v = swap ? a : b;
                    auto it = index.find(words[u].concat(words[v]).key());
                    if (it == index.end())
                        continue;
                    std::size_t w = it->second;
                    if (!seen.insert({cls_of[u], cls_of[v], cls_of[w]}).second)
                        continue;
                    std::size_t t = triples.size();
                    triples.push_back({u, v, w});
                    for (std::size_t c : {cls_of[u], cls_of[v], cls_of[w]})
                        if (triples_by_cls[c].empty() || triples_by_cls[c].back() != t)
                            triples_by_cls[c].push_back(t);
                }
            }
        }

        for (const auto& s : cs.strong)
            strong_words.push_back(index.at(s.word.key()));
        for (const Word& w : cs.properness_witnesses)
            witness_words.push_back(index.at(w.key()));
        frags_by_cls.resize(members.size());
        for (std::size_t f = 0; f < cs.weak.size(); ++f) {
            std::vector<std::size_t> pts;
            std::set<std::size_t> touched;
            for (const auto& pt : cs.weak[f].points) {
                std::size_t id = index.at(pt.word.key());
                pts.push_back(id);
                touched.insert(cls_of[id]);
            }
            for (std::size_t c : touched)
                frags_by_cls[c].push_back(f);
            frag_points.push_back(std::move(pts));
        }

        val.assign(members.size(), -1);
        on_path.assign(words.size(), 0);
        path_members.resize(members.size());
    }

    // -- state --------------------------------------------------------------

    void assign_word(std::size_t w)
    {
        on_path[w] = 1;
        path_members[cls_of[w]].push_back(w);
        trail.push_back({w, false});
    }

    void assign_class(std::size_t c, SignClass v, std::size_t w)
    {
        val[c] = static_cast<int>(v);
        on_path[w] = 1;
        path_members[c].push_back(w);
        trail.push_back({w, true});
    }

    void unwind(std::size_t mark)
    {
        while (trail.size() > mark) {
            TrailItem it = trail.back();
            trail.pop_back();
            on_path[it.word] = 0;
            std::size_t c = cls_of[it.word];
            path_members[c].pop_back();
            if (it.class_unset)
                val[c] = -1;
        }
    }

    // -- rule scanning ------------------------------------------------------

    // consequences of class c having been assigned; returns a conflict or
    // appends forces
    std::optional<RuleInst> scan(std::size_t c, std::deque<Pending>& q)
    {
        SignClass v = static_cast<SignClass>(val[c]);
        // inverse flip
        {
            std::size_t ci = inv_cls[c];
            RuleInst r;
            r.kind = RuleInst::Inverse;
            r.a = canon[c];
            r.b = inv_word[c];
            if (ci == c) {
                if (v != SignClass::RES)
                    return r;
            } else if (val[ci] == -1) {
                q.push_back({ci, flip(v), r, inv_word[c]});
            } else if (static_cast<SignClass>(val[ci]) != flip(v)) {
                return r;
            }
        }
        // products
        for (std::size_t t : triples_by_cls[c]) {
            const Triple& tr = triples[t];
            std::size_t cu = cls_of[tr.u], cv = cls_of[tr.v], cw = cls_of[tr.w];
            int nu = val[cu], nv = val[cv], nw = val[cw];
            RuleInst r;
            r.kind = RuleInst::Product;
            r.a = tr.u;
            r.b = tr.v;
            r.w = tr.w;
            r.idx = t;
            int unassigned = (nu == -1) + (nv == -1) + (nw == -1);
            if (unassigned == 0) {
                if (!product_consistent(static_cast<SignClass>(nu), static_cast<SignClass>(nv),
                                        static_cast<SignClass>(nw)))
                    return r;
            } else if (unassigned == 1) {
                std::size_t hole = nu == -1 ? cu : nv == -1 ? cv : cw;
                std::size_t hole_word = nu == -1 ? tr.u : nv == -1 ? tr.v : tr.w;
                int allowed = -1, count = 0;
                for (int x = 0; x < 3; ++x) {
                    SignClass sx = static_cast<SignClass>(x);
                    SignClass su = nu == -1 ? sx : static_cast<SignClass>(nu);
                    SignClass sv = nv == -1 ? sx : static_cast<SignClass>(nv);
                    SignClass sw = nw == -1 ? sx : static_cast<SignClass>(nw);
                    if (product_consistent(su, sv, sw)) {
                        allowed = x;
                        ++count;
                    }
                }
                if (count == 0)
                    return r; // cannot happen with this table, kept for safety
                if (count == 1)
                    q.push_back({hole, static_cast<SignClass>(allowed), r, hole_word});
            }
        }
        // properness
        if (v == SignClass::RES) {
            bool all_res = true;
            for (std::size_t w : witness_words)
                if (val[cls_of[w]] != static_cast<int>(SignClass::RES)) {
                    all_res = false;
                    break;
                }
            if (all_res) {
                RuleInst r;
                r.kind = RuleInst::Properness;
                return r;
            }
        }
        // weak fragments: conflict when every candidate line is dead
        for (std::size_t f : frags_by_cls[c]) {
            const WeakFragment& frag = cs.weak[f];
            RuleInst r;
            r.kind = RuleInst::Weak;
            r.idx = f;
            bool all_dead = true;
            for (std::size_t ln = 0; ln < frag.lines.size() && all_dead; ++ln) {
                const auto& side = frag.lines[ln].side;
                bool dead = false;
                for (std::size_t i = 0; i < side.size() && !dead; ++i) {
                    if (side[i] == 0)
                        continue;
                    int vi = val[cls_of[frag_points[f][i]]];
                    if (vi == -1 || static_cast<SignClass>(vi) == SignClass::NEG)
                        continue; // need a POS-or-RES point first
                    for (std::size_t j = 0; j < side.size(); ++j) {
                        if (side[j] != side[i])
                            continue;
                        int vj = val[cls_of[frag_points[f][j]]];
                        if (vj != -1 && static_cast<SignClass>(vj) == SignClass::NEG) {
                            dead = true;
                            r.weak_lines.push_back({ln, i, j});
                            break;
                        }
                    }
                }
                if (!dead)
                    all_dead = false;
            }
            if (all_dead)
                return r;
        }
        return std::nullopt;
    }

    // -- certificate emission ----------------------------------------------

    std::string word_str(std::size_t id) const { return words[id].str(pres.generator_names); }

    std::unique_ptr<CertNode> make_leaf(const RuleInst& r) const
    {
        auto leaf = std::make_unique<CertNode>();
        leaf->leaf = true;
        switch (r.kind) {
        case RuleInst::Identity:
            leaf->rule = "identity";
            break;
        case RuleInst::Inverse:
            leaf->rule = "inverse";
            leaf->args = {word_str(r.a), word_str(r.b)};
            break;
        case RuleInst::Product:
            leaf->rule = "product";
            leaf->args = {word_str(r.a), word_str(r.b), word_str(r.w)};
            break;
        case RuleInst::Insert: {
            const EdgeRec& e = erecs[r.idx];
            leaf->rule = "insert";
            leaf->args = {word_str(e.from), word_str(e.to), std::to_string(e.relator),
                          std::to_string(e.sign), std::to_string(e.pos)};
            break;
        }
        case RuleInst::Strong:
            leaf->rule = "strong";
            leaf->args = {word_str(r.w)};
            break;
        case RuleInst::Properness:
            leaf->rule = "properness";
            for (std::size_t w : witness_words)
                leaf->args.push_back(word_str(w));
            break;
        case RuleInst::Weak:
            leaf->rule = "weak";
            leaf->args.push_back(std::to_string(r.idx));
            for (const auto& [ln, i, j] : r.weak_lines)
                leaf->args.push_back(std::to_string(ln) + " " + std::to_string(i) + " " +
                                     std::to_string(j));
            break;
        }
        return leaf;
    }

    // spine builder: forced branches and chain steps nest along the accepted
    // child; `tail` always points at the next empty slot
    struct Spine {
        std::unique_ptr<CertNode> head;
        std::unique_ptr<CertNode>* tail = nullptr;

        Spine() { tail = &head; }
        // attach a branch node whose continuation is the child for `v`
        CertNode* attach(std::unique_ptr<CertNode> node, SignClass v)
        {
            CertNode* raw = node.get();
            *tail = std::move(node);
            tail = &raw->kids[static_cast<int>(v)];
            return raw;
        }
        void attach_leaf(std::unique_ptr<CertNode> leaf) { *tail = std::move(leaf); }
    };

    // ensure `target` is branch-assigned on the path by walking union edges
    // from an already-assigned member of its class
    void materialize(std::size_t target, Spine& spine)
    {
        if (on_path[target])
            return;
        std::size_t c = cls_of[target];
        SignClass v = static_cast<SignClass>(val[c]);
        // BFS over the insertion-edge graph inside the class
        std::unordered_map<std::size_t, std::size_t> via; // word -> edge used
        std::deque<std::size_t> q;
        std::vector<std::size_t> seeds = path_members[c];
        std::sort(seeds.begin(), seeds.end());
        for (std::size_t s : seeds) {
            via.emplace(s, npos);
            q.push_back(s);
        }
        bool reached = false;
        while (!q.empty() && !reached) {
            std::size_t w = q.front();
            q.pop_front();
            for (std::size_t e : eadj[w]) {
                std::size_t o = erecs[e].from == w ? erecs[e].to : erecs[e].from;
                if (via.count(o))
                    continue;
                via.emplace(o, e);
                if (o == target) {
                    reached = true;
                    break;
                }
                q.push_back(o);
            }
        }
        if (!reached)
            throw Error("internal: class member unreachable through insertion edges");
        std::vector<std::size_t> chain; // edges, seed end last after the walk
        std::size_t w = target;
        while (via.at(w) != npos) {
            std::size_t e = via.at(w);
            chain.push_back(e);
            w = erecs[e].from == w ? erecs[e].to : erecs[e].from;
        }
        std::reverse(chain.begin(), chain.end()); // now seed end first
        std::size_t at = w;                       // the seed reached
        for (std::size_t e : chain) {
            std::size_t next = erecs[e].from == at ? erecs[e].to : erecs[e].from;
            auto node = std::make_unique<CertNode>();
            node->word = words[next];
            RuleInst r;
            r.kind = RuleInst::Insert;
            r.idx = e;
            for (int x = 0; x < 3; ++x)
                if (x != static_cast<int>(v))
                    node->kids[x] = make_leaf(r);
            spine.attach(std::move(node), v);
            assign_word(next);
            at = next;
        }
    }

    void materialize_operands(const RuleInst& r, Spine& spine)
    {
        switch (r.kind) {
        case RuleInst::Identity:
            break;
        case RuleInst::Inverse:
            materialize(r.a, spine);
            break;
        case RuleInst::Product:
            for (std::size_t w : {r.a, r.b, r.w})
                if (val[cls_of[w]] != -1)
                    materialize(w, spine);
            break;
        case RuleInst::Insert:
            break;
        case RuleInst::Strong:
            break;
        case RuleInst::Properness:
            for (std::size_t w : witness_words)
                materialize(w, spine);
            break;
        case RuleInst::Weak:
            for (const auto& [ln, i, j] : r.weak_lines) {
                materialize(frag_points[r.idx][i], spine);
                materialize(frag_points[r.idx][j], spine);
            }
            break;
        }
    }

    // -- search -------------------------------------------------------------

    std::unique_ptr<CertNode> conflict_tree(const RuleInst& r, Spine& spine)
    {
        materialize_operands(r, spine);
        // operands that double as the branch word in the forced case must be
        // materialized explicitly when the rule fires as a conflict
        if (r.kind == RuleInst::Strong || r.kind == RuleInst::Identity)
            materialize(r.w, spine);
        if (r.kind == RuleInst::Inverse)
            materialize(r.b, spine);
        spine.attach_leaf(make_leaf(r));
        return std::move(spine.head);
    }

    // solve under the current assignment plus pending forces; returns the
    // contradiction subtree, or null when a survivor or a budget stop occurred
    std::unique_ptr<CertNode> solve(std::deque<Pending> q)
    {
        std::size_t mark = trail.size();
        Spine spine;
        auto done = [&](std::unique_ptr<CertNode> out) {
            unwind(mark);
            return out;
        };

        while (!q.empty()) {
            Pending p = std::move(q.front());
            q.pop_front();
            if (val[p.cls] != -1) {
                if (static_cast<SignClass>(val[p.cls]) == p.v)
                    continue;
                return done(conflict_tree(p.why, spine));
            }
            materialize_operands(p.why, spine);
            auto node = std::make_unique<CertNode>();
            node->word = words[p.branch_word];
            for (int x = 0; x < 3; ++x)
                if (x != static_cast<int>(p.v))
                    node->kids[x] = make_leaf(p.why);
            spine.attach(std::move(node), p.v);
            assign_class(p.cls, p.v, p.branch_word);
            if (auto conflict = scan(p.cls, q))
                return done(conflict_tree(*conflict, spine));
        }

        // decision
        std::size_t pick = npos;
        for (std::size_t c : class_order)
            if (val[c] == -1) {
                pick = c;
                break;
            }
        if (pick == npos) {
            survivor_found = true;
            survivor.clear();
            for (std::size_t c : class_order)
                survivor.push_back({words[canon[c]], static_cast<SignClass>(val[c])});
            unwind(mark);
            return nullptr;
        }
        if (++decisions > opts.max_nodes) {
            budget_hit = true;
            unwind(mark);
            return nullptr;
        }
        auto node = std::make_unique<CertNode>();
        node->word = words[canon[pick]];
        for (int x = 0; x < 3; ++x) {
            std::size_t m2 = trail.size();
            assign_class(pick, static_cast<SignClass>(x), canon[pick]);
            std::deque<Pending> q2;
            std::unique_ptr<CertNode> child;
            if (auto conflict = scan(pick, q2)) {
                Spine sp;
                child = conflict_tree(*conflict, sp);
            } else {
                child = solve(std::move(q2));
            }
            unwind(m2);
            if (!child) {
                unwind(mark);
                return nullptr;
            }
            node->kids[x] = std::move(child);
        }
        spine.attach(std::move(node), SignClass::RES); // continuation unused
        unwind(mark);
        return std::move(spine.head);
    }

    RefuteResult run(std::size_t radius)
    {
        build(radius);
        std::deque<Pending> q;
        {
            RuleInst r;
            r.kind = RuleInst::Identity;
            std::size_t eps = index.at(Word{}.key());
            r.w = eps;
            q.push_back({cls_of[eps], SignClass::RES, r, eps});
        }
        for (std::size_t s = 0; s < strong_words.size(); ++s) {
            RuleInst r;
            r.kind = RuleInst::Strong;
            r.idx = s;
            r.w = strong_words[s];
            q.push_back({cls_of[strong_words[s]], SignClass::RES, r, strong_words[s]});
        }
        auto tree = solve(std::move(q));
        RefuteResult out;
        if (tree) {
            out.kind = RefuteResult::Refuted;
            out.certificate = std::move(tree);
        } else if (budget_hit) {
            out.kind = RefuteResult::Budget;
        } else {
            out.kind = RefuteResult::Unknown;
            out.assignment = std::move(survivor);
        }
        return out;
    }
};

} // namespace

RefuteResult refute(const Presentation& p, const ConstraintSet& cs, std::size_t radius,
                    const RefuteOptions& opts)
{
    Searcher s(p, cs, opts);
    return s.run(radius);
}

// ---------------------------------------------------------------------------
// checker: replays certificates with no access to the search machinery

namespace {

struct Checker {
    const Presentation& pres;
    const ConstraintSet& cs;
    std::map<std::string, SignClass> path; // word key -> class
    std::map<std::string, Word> by_key;

    Checker(const Presentation& p, const ConstraintSet& c) : pres(p), cs(c) {}

    SignClass lookup(const Word& w)
    {
        auto it = path.find(w.key());
        if (it == path.end())
            throw Error("leaf cites word not fixed on the path: " +
                        w.str(pres.generator_names));
        return it->second;
    }

    Word arg_word(const CertNode& n, std::size_t i)
    {
        if (i >= n.args.size())
            throw Error("missing leaf operand");
        return Word::parse(n.args[i], pres.generator_names);
    }

    void verify_leaf(const CertNode& n)
    {
        if (n.rule == "identity") {
            if (lookup(Word{}) == SignClass::RES)
                throw Error("identity leaf without a non-residual identity");
        } else if (n.rule == "inverse") {
            Word a = arg_word(n, 0), b = arg_word(n, 1);
            if (b != a.inverse())
                throw Error("inverse leaf operands are not inverse words");
            if (lookup(b) == flip(lookup(a)))
                throw Error("inverse leaf classes are flip-consistent");
        } else if (n.rule == "product") {
            Word u = arg_word(n, 0), v = arg_word(n, 1), w = arg_word(n, 2);
            if (u.concat(v) != w)
                throw Error("product leaf operands do not multiply");
            if (product_consistent(lookup(u), lookup(v), lookup(w)))
                throw Error("product leaf classes are consistent");
        } else if (n.rule == "insert") {
            Word a = arg_word(n, 0), b = arg_word(n, 1);
            std::size_t k = std::stoull(n.args.at(2));
            int sgn = std::stoi(n.args.at(3));
            std::size_t pos = std::stoull(n.args.at(4));
            if (k >= pres.relators.size() || (sgn != 1 && sgn != -1))
                throw Error("insert leaf cites a bad relator");
            Word rel = sgn > 0 ? pres.relators[k] : pres.relators[k].inverse();
            if (a.insert_at(pos, rel) != b)
                throw Error("insert leaf words are not one insertion apart");
            if (lookup(a) == lookup(b))
                throw Error("insert leaf classes agree");
        } else if (n.rule == "strong") {
            Word w = arg_word(n, 0);
            bool listed = false;
            for (const auto& s : cs.strong)
                if (s.word == w) {
                    listed = true;
                    break;
                }
            if (!listed)
                throw Error("strong leaf cites an unknown constraint word");
            if (lookup(w) == SignClass::RES)
                throw Error("strong leaf word is residual");
        } else if (n.rule == "properness") {
            if (n.args.size() != cs.properness_witnesses.size())
                throw Error("properness leaf witness count mismatch");
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                Word w = arg_word(n, i);
                if (w != cs.properness_witnesses[i])
                    throw Error("properness leaf witness mismatch");
                if (lookup(w) != SignClass::RES)
                    throw Error("properness leaf witness is not residual");
            }
        } else if (n.rule == "weak") {
            std::size_t f = std::stoull(n.args.at(0));
            if (f >= cs.weak.size())
                throw Error("weak leaf cites an unknown fragment");
            const WeakFragment& frag = cs.weak[f];
            if (n.args.size() != frag.lines.size() + 1)
                throw Error("weak leaf must kill every candidate line");
            for (std::size_t x = 0; x < frag.lines.size(); ++x) {
                std::istringstream ls(n.args[x + 1]);
                std::size_t ln, i, j;
                if (!(ls >> ln >> i >> j) || ln != x)
                    throw Error("weak leaf lines out of order");
                if (i >= frag.points.size() || j >= frag.points.size())
                    throw Error("weak leaf point out of range");
                int si = frag.lines[ln].side[i], sj = frag.lines[ln].side[j];
                if (si == 0 || si != sj)
                    throw Error("weak leaf witness points are not on one side");
                if (lookup(frag.points[i].word) == SignClass::NEG)
                    throw Error("weak leaf first witness is not >= 1");
                if (lookup(frag.points[j].word) != SignClass::NEG)
                    throw Error("weak leaf second witness is not negative");
            }
        } else {
            throw Error("unknown contradiction rule '" + n.rule + "'");
        }
    }

    void verify(const CertNode& n)
    {
        if (n.leaf) {
            verify_leaf(n);
            return;
        }
        std::string key = n.word.key();
        if (path.count(key))
            throw Error("word branched twice on one path: " +
                        n.word.str(pres.generator_names));
        for (int x = 0; x < 3; ++x) {
            if (!n.kids[x])
                throw Error("branch does not cover all three classes");
            path[key] = static_cast<SignClass>(x);
            verify(*n.kids[x]);
        }
        path.erase(key);
    }
};

} // namespace

bool check_refutation(const Presentation& p, const ConstraintSet& cs, const CertNode& root,
                      std::string* why)
{
    try {
        Checker c(p, cs);
        c.verify(root);
        return true;
    } catch (const std::exception& e) {
        if (why)
            *why = e.what();
        return false;
    }
}

// ---------------------------------------------------------------------------
// certificate files

namespace {

void write_node(std::ostream& os, const Presentation& p, const CertNode& n)
{
    if (n.leaf) {
        os << "contradiction " << n.rule;
        for (const auto& a : n.args)
            os << " ; " << a;
        os << "\n";
        return;
    }
    os << "branch " << n.word.str(p.generator_names) << "\n";
    static const char* names[] = {"RES", "POS", "NEG"};
    for (int x = 0; x < 3; ++x) {
        os << "class " << names[x] << "\n";
        if (n.kids[x])
            write_node(os, p, *n.kids[x]);
    }
}

std::unique_ptr<CertNode> parse_node(std::istream& is, const Presentation& p)
{
    std::string line;
    if (!std::getline(is, line))
        throw Error("truncated certificate");
    auto node = std::make_unique<CertNode>();
    if (line.rfind("branch ", 0) == 0) {
        node->word = Word::parse(line.substr(7), p.generator_names);
        static const char* names[] = {"RES", "POS", "NEG"};
        for (int x = 0; x < 3; ++x) {
            std::string cls_line;
            if (!std::getline(is, cls_line) || cls_line != std::string("class ") + names[x])
                throw Error("expected 'class " + std::string(names[x]) + "'");
            node->kids[x] = parse_node(is, p);
        }
        return node;
    }
    if (line.rfind("contradiction ", 0) == 0) {
        node->leaf = true;
        std::string rest = line.substr(14);
        std::size_t sep = rest.find(" ; ");
        node->rule = rest.substr(0, sep);
        while (sep != std::string::npos) {
            std::size_t next = rest.find(" ; ", sep + 3);
            node->args.push_back(rest.substr(sep + 3, next == std::string::npos
                                                          ? std::string::npos
                                                          : next - sep - 3));
            sep = next;
        }
        return node;
    }
    throw Error("unknown certificate record: " + line);
}

} // namespace

std::string write_refutation(const Presentation& p, const CertNode& root)
{
    std::ostringstream os;
    write_node(os, p, root);
    return os.str();
}

std::unique_ptr<CertNode> parse_refutation(const Presentation& p, const std::string& text)
{
    std::istringstream is(text);
    auto node = parse_node(is, p);
    std::string extra;
    while (std::getline(is, extra))
        if (!extra.empty())
            throw Error("trailing certificate content: " + extra);
    return node;
}

} // namespace chainmail
