#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chainmail/presentation.hpp"
#include "chainmail/sign.hpp"
#include "chainmail/slope_set.hpp"

namespace chainmail {

// A line through the origin used to split the lattice box [-n,n]^2.  Lattice
// lines pass through box points and carry that primitive direction; gap lines
// sit strictly between two angularly adjacent lattice directions and carry a
// rational direction from the open slope interval (lo, hi).
struct LineCandidate {
    long long x, y; // direction: the line is { (p,q) : p*y == q*x }
    bool lattice;
    std::optional<Rat> lo, hi; // for gap lines: the open value interval covered
};

// All candidate lines of the box, lattice directions in decreasing slope value
// starting at infinity, each followed by the gap below it.
std::vector<LineCandidate> candidate_lines(long long n);

// Result of reading a slope off a sign assignment on the box: either the
// whole box sits in the residue class (every slope fits), or the set of
// slopes of separating lines compatible with the signs.
struct Z2Detection {
    bool all_residue;
    SlopeSet slopes;
};

// Signs must satisfy cls(-p,-q) = flip(cls(p,q)); throws if no separating
// line is compatible with the assignment.
Z2Detection detect_slope_z2(long long n, const std::function<SignClass(long long, long long)>& cls);

// One tracked lattice point of a weak-detection fragment.
struct BoxPoint {
    long long p, q;
    Word word; // conj * mer^p * lon^q * conj^-1, reduced
};

// Line restricted to a fragment: per-point side signs sign(p*y - q*x).
struct FragmentLine {
    LineCandidate line;
    std::vector<int> side; // aligned with WeakFragment::points
};

// "Some slope in `slopes` is weakly detected with respect to the conjugated
// pair": at least one stored line must have no side carrying both a
// POS-or-RES point and a NEG point.
struct WeakFragment {
    Word mer, lon, conjugator;
    SlopeSet slopes;
    std::vector<BoxPoint> points;
    std::vector<FragmentLine> lines;
};

struct StrongConstraint {
    Word word; // must be RES
};

struct ConstraintSet {
    long long box_n = 1;
    std::vector<Word> properness_witnesses; // at least one must be non-RES
    std::vector<StrongConstraint> strong;
    std::vector<WeakFragment> weak;
};

// Appends one fragment per conjugator.  A slope set covering the whole
// projective line appends nothing (the disjunction is vacuous).
void instantiate_weak_detection(ConstraintSet& cs, const Word& mer, const Word& lon,
                                const SlopeSet& slopes, const std::vector<Word>& conjugators,
                                long long box_n);

// Appends class(c * mer^p * lon^q * c^-1) = RES per conjugator.
void instantiate_strong_detection(ConstraintSet& cs, const Word& mer, const Word& lon, Slope s,
                                  const std::vector<Word>& conjugators);

// All reduced words of length <= len over the presentation's generators, in
// shortlex order: the default conjugator list.
std::vector<Word> words_up_to(const Presentation& p, std::size_t len);

// Constraints carried by a fully or partly filled chainmail presentation:
// properness over all generators plus, per filling, strong detection of the
// filled slope and weak detection of that slope at every conjugate.
ConstraintSet constraints_from_filled(const Presentation& p, std::size_t conj_len = 2,
                                      long long box_n = 1);

// Certificate tree.  A branch node fixes the class of a word and has one
// child per class in order RES, POS, NEG; a leaf cites a contradiction rule
// whose operands are all fixed on the path above it.
struct CertNode {
    bool leaf = false;
    Word word;                     // branch nodes
    std::string rule;              // leaf nodes
    std::vector<std::string> args; // leaf operands (words serialized, indices)
    std::array<std::unique_ptr<CertNode>, 3> kids;
};

struct RefuteOptions {
    std::size_t max_nodes = 1000000; // decision nodes
    std::size_t max_words = 200000;  // word universe budget
    std::size_t pair_len = 2;        // product triples need one factor this short
    std::size_t scratch_slack = 2;   // scratch words may exceed the ball by this plus
                                     // the longest relator
};

struct RefuteResult {
    enum Kind { Refuted, Unknown, Budget } kind;
    std::unique_ptr<CertNode> certificate;              // Refuted
    std::vector<std::pair<Word, SignClass>> assignment; // Unknown: a survivor
};

// Exhausts sign-class assignments on the radius-r ball (closed under free
// reduction and bounded relator insertion).  Refuted means no left total
// preorder satisfies the constraints; Unknown proves nothing.
RefuteResult refute(const Presentation& p, const ConstraintSet& cs, std::size_t radius,
                    const RefuteOptions& opts = {});

// Replays a certificate from scratch: every branch covers the three classes,
// no word is re-branched on a path, and every leaf's rule re-verifies from
// the path assignments alone.
bool check_refutation(const Presentation& p, const ConstraintSet& cs, const CertNode& root,
                      std::string* why = nullptr);

std::string write_refutation(const Presentation& p, const CertNode& root);
std::unique_ptr<CertNode> parse_refutation(const Presentation& p, const std::string& text);

} // namespace chainmail
