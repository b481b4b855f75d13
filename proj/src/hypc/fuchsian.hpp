#pragma once
// Discrete groups of hyperbolic isometries: generator alphabets, ball
// enumeration with matrix deduplication, conjugacy data (axis, translation
// length, primitive root), and canonical coset representatives along an axis.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypc/plane.hpp"

namespace hypc {

using Word = std::vector<int>;

struct GroupSpec {
    std::string name;
    std::vector<Isometry> alphabet;  // generating set, closed under inversion
    std::vector<int> inverse_of;     // index of each letter's inverse letter
    std::vector<Word> relators;      // optional; products are +-identity
    bool cocompact = false;
};

// Built-ins by name: "bolza" (genus-2 regular-octagon surface group,
// constructed and validated at load), "cyclic-demo" (one hyperbolic
// translation of length 2), "free2-demo" (rank-2 free group, non-cocompact,
// for geometry tests).  Anything else is treated as a path to a JSON file
// with fields: name, generators (4-tuples row-major), relators (optional
// letter index lists), cocompact.
GroupSpec load_group(const std::string& name_or_path);
GroupSpec parse_group_json(const std::string& text);

struct GroupElement {
    Isometry mat;  // canonical sign, unit determinant
    Word word;     // letter sequence; alphabet product equals mat
};

GroupElement word_element(const GroupSpec& G, const Word& w);
Word inverse_word(const GroupSpec& G, const Word& w);
// Largest displacement of y by a single letter.
double max_displacement(const GroupSpec& G, const HPoint& y);

struct BallOptions {
    double radius = 0.0;  // accept elements with dist(x, g y) <= radius
    HPoint x = kOrigin;
    HPoint y = kOrigin;
    int word_cap = 8;
    // When set, a prefix w is dropped once dist(x, w y) exceeds
    // radius + (word_cap - |w|) * max letter displacement of y: no allowed
    // completion can re-enter the ball.  Off by default; the certificate is
    // the completeness guard either way.
    bool prune = false;
    int workers = 0;                          // 0 = default_workers()
    std::size_t batch = std::size_t(1) << 22;  // candidates per generation pass
    std::size_t max_visited = std::size_t(100) << 20;
};

// Elements g with dist(x, g y) <= radius among words of length <= word_cap,
// duplicate-free, ordered by (word length, lexicographic word).
struct Ball {
    double radius = 0.0;
    HPoint x, y;
    int word_cap = 0;
    bool pruned = false;
    bool complete = false;  // certificate at the full radius

    std::vector<Isometry> mats;
    std::vector<double> dists;  // dist(x, mats[i] y)
    std::vector<std::uint8_t> wordlens;
    std::vector<std::uint64_t> word_offsets;  // size()+1 entries
    std::vector<std::int8_t> letters;         // concatenated words

    std::size_t size() const { return mats.size(); }
    Word word_of(std::size_t i) const;
    GroupElement element(std::size_t i) const;
    std::size_t count_within(double T) const;
    // Count restricted to word length <= cap.
    std::size_t count_within(double T, int cap) const;
    // Certificate: counts at word caps word_cap-2, word_cap-1, word_cap agree.
    bool complete_at(double T) const;
    std::uint64_t order_digest() const;  // hash of the enumerated word stream
};

Ball enumerate_ball(const GroupSpec& G, const BallOptions& opt);

struct ConjClass {
    GroupElement gamma;
    GroupElement primitive_root;  // gamma equals primitive_root^power
    Word primitive_inverse_word;  // letter-wise inverse of the root's word
    int power = 1;
    Geodesic axis;  // oriented from the repelling to the attracting endpoint
    double translation_length = 0.0;  // of gamma

    double primitive_length() const { return translation_length / power; }
};

// Requires |trace| > 2 + 1e-9 (throws std::domain_error otherwise).  The
// primitive root is located by matching axis translations of length l/k,
// k <= max_root_power, against a word ball around the origin.
ConjClass conj_data(const GroupSpec& G, const GroupElement& g,
                    int max_root_power = 12);

struct CosetRep {
    GroupElement g;
    double axis_coordinate = 0.0;  // in [0, primitive translation length)
};

// Insert-if-absent set of canonical matrices, with the same quantization and
// tolerance policy as the enumeration index.  For deduplicating coset
// representatives and conjugate elements; single-threaded.
class MatrixDedup {
  public:
    // True when m was new; false when an equivalent matrix is recorded.
    bool insert(const Isometry& m);
    std::size_t size() const { return count_; }

  private:
    std::unordered_map<std::uint64_t, std::vector<Isometry>> cells_;
    std::size_t count_ = 0;
};

// Representative primitive^-n * g of the coset <primitive> g whose projected
// basepoint P_axis(rep x) has axis coordinate in [0, l(primitive)), measured
// from the foot of kOrigin toward the attracting endpoint.
CosetRep coset_canonicalize(const ConjClass& c, const GroupElement& g,
                            const HPoint& x);

}  // namespace hypc
