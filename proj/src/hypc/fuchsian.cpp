#include "hypc/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>

#include "hypc/parallel.hpp"
#include "json.hpp"

namespace hypc {
namespace {

constexpr double kDedupRel = 1e-7;   // matrices closer than this are one element
constexpr double kGridRel = 1e-7;    // quantization cell, relative to max entry
constexpr double kGuardFrac = 1e-4;  // probe the neighbor cell this close to an edge
constexpr std::uint32_t kNone = 0xffffffffu;

std::uint64_t fnv_mix(std::uint64_t h, const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

struct CellKey {
    std::int64_t c[4];
};

// Primary cell first, then the guard-band neighbor combinations.  Drift
// between two float realizations of one group element is orders of magnitude
// smaller than the guard width, so whenever copies straddle a cell edge each
// copy's probe set covers the other's primary cell.
int quantize(const Isometry& m, CellKey out[16]) {
    double s = m.max_abs() * kGridRel;
    const double e[4] = {m.a, m.b, m.c, m.d};
    std::int64_t base[4];
    int alt[4];
    for (int i = 0; i < 4; ++i) {
        double u = e[i] / s;
        base[i] = std::llround(u);
        double frac = u - static_cast<double>(base[i]);
        alt[i] = 0;
        if (0.5 - std::abs(frac) < kGuardFrac) alt[i] = frac > 0 ? 1 : -1;
    }
    int count = 0;
    for (int mask = 0; mask < 16; ++mask) {
        bool ok = true;
        for (int i = 0; i < 4; ++i)
            if ((mask >> i & 1) && alt[i] == 0) ok = false;
        if (!ok) continue;
        CellKey k;
        for (int i = 0; i < 4; ++i)
            k.c[i] = base[i] + ((mask >> i & 1) ? alt[i] : 0);
        out[count++] = k;
    }
    return count;
}

std::uint64_t cell_hash(const CellKey& k) {
    std::uint64_t h = fnv_mix(1469598103934665603ULL, k.c, sizeof k.c);
    return h == 0 ? 1 : h;
}

// Append-only element store with stable addresses (chunked, never moved), so
// readers stay valid while a writer appends.
class Arena {
    static constexpr std::size_t kChunkBits = 20;
    static constexpr std::size_t kChunk = std::size_t(1) << kChunkBits;
    std::vector<std::unique_ptr<Isometry[]>> chunks_;
    std::size_t n_ = 0;

  public:
    std::size_t size() const { return n_; }
    const Isometry& operator[](std::size_t i) const {
        return chunks_[i >> kChunkBits][i & (kChunk - 1)];
    }
    std::uint32_t push(const Isometry& m) {
        if ((n_ & (kChunk - 1)) == 0 && (n_ >> kChunkBits) == chunks_.size())
            chunks_.push_back(std::make_unique<Isometry[]>(kChunk));
        chunks_[n_ >> kChunkBits][n_ & (kChunk - 1)] = m;
        return static_cast<std::uint32_t>(n_++);
    }
    void pop() { --n_; }
};

// Set of group-element matrices keyed by quantized cells.  Sharded
// open-addressing tables under per-shard mutexes: insert-if-absent may be
// called concurrently; hits are confirmed against the arena matrix so hash
// collisions cannot merge distinct elements.
class MatrixSet {
    static constexpr int kShards = 256;
    struct Shard {
        std::vector<std::uint64_t> hash;  // 0 = empty slot
        std::vector<std::uint32_t> idx;
        std::size_t used = 0;
        std::mutex mu;
    };
    Shard shards_[kShards];
    const Arena* arena_;

    static int shard_of(std::uint64_t h) { return static_cast<int>(h >> 56); }

    static void grow(Shard& s) {
        std::size_t cap = s.hash.empty() ? 4096 : s.hash.size() * 2;
        std::vector<std::uint64_t> nh(cap, 0);
        std::vector<std::uint32_t> ni(cap);
        std::size_t mask = cap - 1;
        for (std::size_t i = 0; i < s.hash.size(); ++i) {
            if (s.hash[i] == 0) continue;
            std::size_t pos = s.hash[i] & mask;
            while (nh[pos] != 0) pos = (pos + 1) & mask;
            nh[pos] = s.hash[i];
            ni[pos] = s.idx[i];
        }
        s.hash.swap(nh);
        s.idx.swap(ni);
    }

    // Scan one shard for a confirmed match of m under hash h.
    std::uint32_t find_locked(Shard& s, std::uint64_t h, const Isometry& m) const {
        if (s.hash.empty()) return kNone;
        std::size_t mask = s.hash.size() - 1;
        std::size_t pos = h & mask;
        while (s.hash[pos] != 0) {
            if (s.hash[pos] == h && rel_gap((*arena_)[s.idx[pos]], m) <= kDedupRel)
                return s.idx[pos];
            pos = (pos + 1) & mask;
        }
        return kNone;
    }

  public:
    explicit MatrixSet(const Arena* arena) : arena_(arena) {}

    // Returns the index of an existing equal element, or kNone after
    // registering new_idx (whose matrix must already be in the arena).
    std::uint32_t insert_if_absent(const Isometry& m, std::uint32_t new_idx) {
        CellKey keys[16];
        int nk = quantize(m, keys);
        std::uint64_t hs[16];
        int sh[16];
        for (int i = 0; i < nk; ++i) {
            hs[i] = cell_hash(keys[i]);
            sh[i] = shard_of(hs[i]);
        }
        int order[16];
        for (int i = 0; i < nk; ++i) order[i] = i;
        std::sort(order, order + nk, [&](int a, int b) { return sh[a] < sh[b]; });
        // lock the involved shards in ascending order (no deadlock)
        std::unique_lock<std::mutex> locks[16];
        int nlocks = 0, prev = -1;
        for (int oi = 0; oi < nk; ++oi) {
            int s = sh[order[oi]];
            if (s != prev) {
                locks[nlocks++] = std::unique_lock<std::mutex>(shards_[s].mu);
                prev = s;
            }
        }
        for (int i = 0; i < nk; ++i) {
            std::uint32_t hit = find_locked(shards_[sh[i]], hs[i], m);
            if (hit != kNone) return hit;
        }
        Shard& home = shards_[sh[0]];
        if (home.hash.empty() || (home.used + 1) * 10 > home.hash.size() * 6)
            grow(home);
        std::size_t mask = home.hash.size() - 1;
        std::size_t pos = hs[0] & mask;
        while (home.hash[pos] != 0) pos = (pos + 1) & mask;
        home.hash[pos] = hs[0];
        home.idx[pos] = new_idx;
        ++home.used;
        return kNone;
    }
};

Isometry ipow(const Isometry& m, int n) {
    Isometry r = Isometry::identity();
    for (int i = 0; i < n; ++i) r = r * m;
    return r;
}

void validate_alphabet(GroupSpec& G) {
    std::size_t A = G.alphabet.size();
    if (A == 0) throw std::invalid_argument("group has no generators");
    if (G.inverse_of.empty()) {
        G.inverse_of.assign(A, -1);
        for (std::size_t i = 0; i < A; ++i) {
            for (std::size_t j = 0; j < A; ++j) {
                if (rel_gap(G.alphabet[i] * G.alphabet[j], Isometry::identity()) <=
                    1e-9) {
                    G.inverse_of[i] = static_cast<int>(j);
                    break;
                }
            }
            if (G.inverse_of[i] < 0)
                throw std::invalid_argument(
                    "alphabet is not closed under inversion: letter " +
                    std::to_string(i));
        }
    }
    for (const Word& w : G.relators) {
        Isometry prod = Isometry::identity();
        for (int l : w) {
            if (l < 0 || static_cast<std::size_t>(l) >= A)
                throw std::invalid_argument("relator letter out of range");
            prod = prod * G.alphabet[l];
        }
        // canonical sign folds -identity onto identity
        if (rel_gap(prod, Isometry::identity()) > 1e-6)
            throw std::invalid_argument("relator validation failed in group " +
                                        G.name);
    }
}

GroupSpec make_cyclic_demo() {
    GroupSpec G;
    G.name = "cyclic-demo";
    double e = std::exp(1.0);
    G.alphabet = {Isometry::from_entries(e, 0, 0, 1 / e),
                  Isometry::from_entries(1 / e, 0, 0, e)};
    G.inverse_of = {1, 0};
    G.cocompact = false;
    validate_alphabet(G);
    return G;
}

GroupSpec make_free2_demo() {
    GroupSpec G;
    G.name = "free2-demo";
    Isometry a = Isometry::from_entries(3, 0, 0, 1.0 / 3);
    Isometry n = Isometry::from_entries(2, 1, 1, 1);
    Isometry b = n * a * n.inverse();
    G.alphabet = {a, b, a.inverse(), b.inverse()};
    G.inverse_of = {2, 3, 0, 1};
    G.cocompact = false;
    validate_alphabet(G);
    return G;
}

GroupSpec make_bolza();

GroupSpec load_group_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("unknown group name or unreadable file: " +
                                    path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_group_json(buf.str());
}

}  // namespace

GroupSpec parse_group_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    GroupSpec G;
    G.name = j.value("name", "unnamed");
    G.cocompact = j.value("cocompact", false);
    if (!j.contains("generators") || !j["generators"].is_array())
        throw std::invalid_argument("group config needs a generators array");
    for (const auto& row : j["generators"]) {
        if (!row.is_array() || row.size() != 4)
            throw std::invalid_argument("generator must be a 4-tuple row-major");
        double a = row[0], b = row[1], c = row[2], d = row[3];
        double det = a * d - b * c;
        if (std::abs(det - 1.0) > 1e-9)
            throw std::invalid_argument("generator determinant is not 1");
        G.alphabet.push_back(Isometry::from_entries(a, b, c, d));
    }
    if (j.contains("relators")) {
        for (const auto& rw : j["relators"]) {
            Word w;
            for (const auto& l : rw) w.push_back(l.get<int>());
            G.relators.push_back(std::move(w));
        }
    }
    validate_alphabet(G);
    return G;
}

GroupSpec load_group(const std::string& name_or_path) {
    if (name_or_path == "cyclic-demo") return make_cyclic_demo();
    if (name_or_path == "free2-demo") return make_free2_demo();
    if (name_or_path == "bolza") return make_bolza();
    return load_group_file(name_or_path);
}

GroupElement word_element(const GroupSpec& G, const Word& w) {
    Isometry m = Isometry::identity();
    for (int l : w) {
        if (l < 0 || static_cast<std::size_t>(l) >= G.alphabet.size())
            throw std::invalid_argument("word letter out of range");
        m = m * G.alphabet[l];
    }
    return GroupElement{m, w};
}

Word inverse_word(const GroupSpec& G, const Word& w) {
    Word r;
    r.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(G.inverse_of[*it]);
    return r;
}

double max_displacement(const GroupSpec& G, const HPoint& y) {
    double m = 0;
    for (const Isometry& a : G.alphabet) m = std::max(m, dist(y, apply(a, y)));
    return m;
}

Word Ball::word_of(std::size_t i) const {
    return Word(letters.begin() + static_cast<std::ptrdiff_t>(word_offsets[i]),
                letters.begin() + static_cast<std::ptrdiff_t>(word_offsets[i + 1]));
}

GroupElement Ball::element(std::size_t i) const {
    return GroupElement{mats[i], word_of(i)};
}

std::size_t Ball::count_within(double T) const {
    std::size_t n = 0;
    for (double d : dists) n += (d <= T);
    return n;
}

std::size_t Ball::count_within(double T, int cap) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < dists.size(); ++i)
        n += (dists[i] <= T && wordlens[i] <= cap);
    return n;
}

bool Ball::complete_at(double T) const {
    if (word_cap < 2) return false;
    if (T > radius) return false;  // the ball says nothing beyond its radius
    return count_within(T, word_cap - 2) == count_within(T, word_cap);
}

std::uint64_t Ball::order_digest() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < size(); ++i) {
        h = fnv_mix(h, &wordlens[i], 1);
        h = fnv_mix(h, letters.data() + word_offsets[i],
                    static_cast<std::size_t>(word_offsets[i + 1] - word_offsets[i]));
    }
    return h;
}

Ball enumerate_ball(const GroupSpec& G, const BallOptions& opt) {
    if (!(opt.radius >= 0)) throw std::invalid_argument("ball radius must be >= 0");
    if (opt.word_cap < 1 || opt.word_cap > 250)
        throw std::invalid_argument("word cap out of range");
    const std::size_t A = G.alphabet.size();

    Ball ball;
    ball.radius = opt.radius;
    ball.x = opt.x;
    ball.y = opt.y;
    ball.word_cap = opt.word_cap;
    ball.pruned = opt.prune;
    ball.word_offsets.push_back(0);

    double maxdisp = opt.prune ? max_displacement(G, opt.y) : 0.0;

    Arena arena;
    MatrixSet seen(&arena);
    std::vector<std::uint32_t> parent;
    std::vector<std::int8_t> last;

    arena.push(Isometry::identity());
    seen.insert_if_absent(arena[0], 0);
    parent.push_back(0);
    last.push_back(-1);

    auto accept_member = [&](const Isometry& m, double d, int level,
                             std::uint32_t self) {
        ball.mats.push_back(m);
        ball.dists.push_back(d);
        ball.wordlens.push_back(static_cast<std::uint8_t>(level));
        std::size_t at = ball.letters.size();
        ball.letters.resize(at + static_cast<std::size_t>(level));
        std::uint32_t node = self;
        for (int k = level - 1; k >= 0; --k) {
            ball.letters[at + static_cast<std::size_t>(k)] = last[node];
            node = parent[node];
        }
        ball.word_offsets.push_back(ball.letters.size());
    };

    double d0 = dist(opt.x, opt.y);
    if (d0 <= opt.radius) accept_member(arena[0], d0, 0, 0);

    std::vector<Isometry> cmats;
    std::vector<double> cdists;

    std::size_t lvl_begin = 0, lvl_end = 1;
    for (int level = 1; level <= opt.word_cap && lvl_end > lvl_begin; ++level) {
        const std::size_t per = (level == 1) ? A : A - 1;
        if (per == 0) break;
        const std::size_t ncand = (lvl_end - lvl_begin) * per;
        const double prune_thresh =
            opt.radius + maxdisp * static_cast<double>(opt.word_cap - level);
        auto decode = [&](std::size_t cc, std::uint32_t* p, int* let) {
            *p = static_cast<std::uint32_t>(lvl_begin + cc / per);
            int slot = static_cast<int>(cc % per);
            if (level == 1) {
                *let = slot;
            } else {
                int skip = G.inverse_of[last[*p]];
                *let = slot < skip ? slot : slot + 1;
            }
        };

        for (std::size_t blo = 0; blo < ncand; blo += opt.batch) {
            const std::size_t bhi = std::min(ncand, blo + opt.batch);
            const std::size_t bn = bhi - blo;
            if (cmats.size() < bn) {
                cmats.resize(bn);
                cdists.resize(bn);
            }
            parallel_for(bn, opt.workers, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t c = lo; c < hi; ++c) {
                    std::uint32_t p;
                    int let;
                    decode(blo + c, &p, &let);
                    Isometry m = arena[p] * G.alphabet[static_cast<std::size_t>(let)];
                    cmats[c] = m;
                    cdists[c] = dist(opt.x, apply(m, opt.y));
                }
            });
            // ordered insertion keeps the retained word (and thus the output
            // stream) independent of worker count and batch size
            for (std::size_t c = 0; c < bn; ++c) {
                if (opt.prune && cdists[c] > prune_thresh) continue;
                if (arena.size() >= opt.max_visited)
                    throw std::runtime_error(
                        "ball enumeration exceeded the visited-element limit");
                std::uint32_t ni = arena.push(cmats[c]);
                if (seen.insert_if_absent(cmats[c], ni) != kNone) {
                    arena.pop();
                    continue;
                }
                std::uint32_t p;
                int let;
                decode(blo + c, &p, &let);
                parent.push_back(p);
                last.push_back(static_cast<std::int8_t>(let));
                if (cdists[c] <= opt.radius)
                    accept_member(cmats[c], cdists[c], level, ni);
            }
        }
        lvl_begin = lvl_end;
        lvl_end = arena.size();
    }

    ball.complete = ball.complete_at(opt.radius);
    return ball;
}

namespace {

// Fixed point for eigenvalue ev: any nonzero column of (M - ov*I), where ov is
// the other eigenvalue, is an eigenvector for ev.  Picking the larger column
// keeps the quotient away from 0/0 noise (e.g. diagonal matrices, where the
// naive row formulas divide rounding residue by rounding residue).
HBoundary fixed_point(double a, double b, double c, double d, double ev, double ov) {
    (void)ev;
    double x1 = a - ov, y1 = c;
    double x2 = b, y2 = d - ov;
    double n1 = std::max(std::abs(x1), std::abs(y1));
    double n2 = std::max(std::abs(x2), std::abs(y2));
    double x = x1, y = y1, n = n1;
    if (n2 > n1) { x = x2; y = y2; n = n2; }
    if (std::abs(y) <= 1e-13 * n) return HBoundary::infinity();
    return HBoundary::at(x / y + 0.0);  // +0.0 folds -0 into +0
}

}  // namespace

ConjClass conj_data(const GroupSpec& G, const GroupElement& g, int max_root_power) {
    double tr = g.mat.trace();
    if (std::abs(tr) <= 2.0 + 1e-9)
        throw std::domain_error("conj_data requires a hyperbolic element");
    double sn = tr < 0 ? -1.0 : 1.0;
    double a = sn * g.mat.a, b = sn * g.mat.b, c = sn * g.mat.c, d = sn * g.mat.d;
    tr *= sn;
    double disc = std::sqrt(tr * tr - 4.0);
    double lam = 0.5 * (tr + disc), mu = 0.5 * (tr - disc);
    HBoundary att = fixed_point(a, b, c, d, lam, mu);
    HBoundary rep = fixed_point(a, b, c, d, mu, lam);
    Geodesic axis(rep, att);
    double ell = 2.0 * std::acosh(0.5 * tr);
    if (rel_gap(translation(axis, ell), g.mat) > 1e-5)
        throw std::runtime_error("axis reconstruction failed for conjugacy data");

    GroupElement root = g;
    int power = 1;
    if (max_root_power >= 2) {
        // Cyclically reduce the word first: for g = u v u^-1 the root search on
        // v runs near the base point (small ball), and roots transport back by
        // conjugation.  Trace, length, and power are conjugation invariants.
        Word prefix;
        Word core = g.word;
        while (core.size() >= 2 && !G.inverse_of.empty() &&
               core.front() ==
                   G.inverse_of[static_cast<std::size_t>(core.back())]) {
            prefix.push_back(core.front());
            core.erase(core.begin());
            core.pop_back();
        }
        if (!prefix.empty()) {
            GroupElement u = word_element(G, prefix);
            Isometry ui = u.mat.inverse();
            GroupElement inner{ui * g.mat * u.mat, core};
            ConjClass ic = conj_data(G, inner, max_root_power);
            power = ic.power;
            if (power > 1) {
                Word rw = prefix;
                rw.insert(rw.end(), ic.primitive_root.word.begin(),
                          ic.primitive_root.word.end());
                Word pinv = inverse_word(G, prefix);
                rw.insert(rw.end(), pinv.begin(), pinv.end());
                root = GroupElement{u.mat * ic.primitive_root.mat * ui,
                                    std::move(rw)};
            }
        } else {
            double reach = dist(kOrigin, apply(translation(axis, ell / 2), kOrigin));
            double mind = 1e300;
            for (const Isometry& m : G.alphabet)
                mind = std::min(mind, dist(kOrigin, apply(m, kOrigin)));
            mind = std::max(mind, 0.05);
            BallOptions bo;
            bo.radius = reach + 0.5;
            // Word length of a member can exceed displacement / mind by a lot
            // (conjugates travel out and back), so also budget ~0.62 letters
            // per unit of radius before trusting the certificate.
            double depth = std::max(bo.radius / mind, 0.62 * bo.radius);
            bo.word_cap = std::clamp(static_cast<int>(std::ceil(depth)) + 4, 4, 18);
            bo.prune = true;
            Ball ball = enumerate_ball(G, bo);
            if (!ball.complete) {
                bo.word_cap += 3;
                ball = enumerate_ball(G, bo);
                if (!ball.complete)
                    throw std::runtime_error("root search ball did not stabilize");
            }
            for (int k = max_root_power; k >= 2 && power == 1; --k) {
                Isometry cand = translation(axis, ell / k);
                for (std::size_t i = 0; i < ball.size(); ++i) {
                    if (rel_gap(cand, ball.mats[i]) <= 1e-6) {
                        root = ball.element(i);
                        power = k;
                        break;
                    }
                }
            }
        }
    }
    if (rel_gap(ipow(root.mat, power), g.mat) > 1e-6)
        throw std::runtime_error("primitive root verification failed");
    return ConjClass{g, root, inverse_word(G, root.word), power, axis, ell};
}

bool MatrixDedup::insert(const Isometry& m) {
    CellKey keys[16];
    int nk = quantize(m, keys);
    for (int i = 0; i < nk; ++i) {
        auto it = cells_.find(cell_hash(keys[i]));
        if (it == cells_.end()) continue;
        for (const Isometry& held : it->second)
            if (rel_gap(held, m) <= kDedupRel) return false;
    }
    cells_[cell_hash(keys[0])].push_back(m);
    ++count_;
    return true;
}

CosetRep coset_canonicalize(const ConjClass& c, const GroupElement& g,
                            const HPoint& x) {
    const double lhat = c.primitive_length();
    const Isometry chart = axis_chart_through(c.axis, kOrigin);
    auto coord = [&](const Isometry& m) {
        HPoint w = apply(chart, apply(m, x));
        return std::log(std::hypot(w.x, w.y));
    };

    // rep = root^-n g shifts the axis coordinate of g x by -n * lhat
    auto build = [&](long n) -> GroupElement {
        if (n == 0) return g;
        const Isometry step = n > 0 ? c.primitive_root.mat.inverse()
                                    : c.primitive_root.mat;
        const Word& sw = n > 0 ? c.primitive_inverse_word : c.primitive_root.word;
        long reps = std::labs(n);
        Isometry shift = Isometry::identity();
        Word w;
        w.reserve(sw.size() * static_cast<std::size_t>(reps) + g.word.size());
        for (long i = 0; i < reps; ++i) {
            shift = shift * step;
            w.insert(w.end(), sw.begin(), sw.end());
        }
        w.insert(w.end(), g.word.begin(), g.word.end());
        return GroupElement{shift * g.mat, std::move(w)};
    };

    long n = static_cast<long>(std::floor(coord(g.mat) / lhat));
    GroupElement rep = build(n);
    double srep = coord(rep.mat);
    for (int guard = 0; guard < 3 && (srep < 0 || srep >= lhat); ++guard) {
        n += (srep < 0) ? -1 : 1;
        rep = build(n);
        srep = coord(rep.mat);
    }
    return CosetRep{std::move(rep), srep};
}

namespace {

GroupSpec make_bolza() {
    GroupSpec G;
    G.name = "bolza";
    G.cocompact = true;
    const double cot8 = 1.0 + std::sqrt(2.0);        // cot(pi/8)
    const double m = std::acosh(cot8);               // center to side midpoint
    const double ell0 = 2.0 * m;                     // side-pairing length
    Isometry t0 = Isometry::from_entries(std::exp(m), 0, 0, std::exp(-m));
    for (int k = 0; k < 8; ++k) {
        Isometry r = rotation_about_origin(k * kPi / 4.0);
        G.alphabet.push_back(r * t0 * r.inverse());
        G.inverse_of.push_back((k + 4) % 8);
    }
    // single octagon relator, pinned from the reduced-word search in tests
    G.relators = {{0, 3, 6, 1, 4, 7, 2, 5}};

    validate_alphabet(G);
    for (int k = 0; k < 8; ++k) {
        if (std::abs(G.alphabet[static_cast<std::size_t>(k)].trace()) <= 2.0)
            throw std::runtime_error("bolza generator is not hyperbolic");
        double disp = dist(kOrigin, apply(G.alphabet[static_cast<std::size_t>(k)],
                                          kOrigin));
        if (std::abs(disp - ell0) > 1e-9)
            throw std::runtime_error("bolza generator displacement is off");
    }

    // vertex angles of the octagon must add to one full turn
    double rc = std::acosh(cot8 * cot8);  // circumradius
    HPoint v[8];
    for (int j = 0; j < 8; ++j)
        v[j] = point_at(kOrigin, (2 * j + 1) * kPi / 8.0, rc);
    double sum = 0;
    for (int j = 0; j < 8; ++j) {
        const HPoint& prev = v[(j + 7) % 8];
        const HPoint& next = v[(j + 1) % 8];
        double a1 = angle_from(v[j], tangent(v[j], prev).fwd);
        double a2 = angle_from(v[j], tangent(v[j], next).fwd);
        double delta = std::abs(a1 - a2);
        if (delta > kPi) delta = 2 * kPi - delta;
        sum += delta;
    }
    if (std::abs(sum - 2 * kPi) > 1e-6)
        throw std::runtime_error("octagon vertex angle sum validation failed");

    // discreteness probe: nothing nontrivial moves the origin less than 1e-3
    BallOptions bo;
    bo.radius = 1e-3;
    bo.word_cap = 6;
    bo.prune = true;
    Ball probe = enumerate_ball(G, bo);
    if (probe.size() != 1)
        throw std::runtime_error("discreteness probe found a small displacement");

    return G;
}

}  // namespace

}  // namespace hypc
