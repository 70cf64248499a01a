#pragma once

#include <lgc/matrix_jet.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace lgc {

/// Young diagram as nonincreasing row lengths.
struct YoungDiagram {
    std::vector<int> rows;

    YoungDiagram() = default;
    explicit YoungDiagram(std::vector<int> r) : rows(std::move(r)) {
        if (rows.empty()) throw ShapeError("YoungDiagram: no rows");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i] < 1) throw ShapeError("YoungDiagram: nonpositive row length");
            if (i > 0 && rows[i] > rows[i - 1]) throw ShapeError("YoungDiagram: rows must be nonincreasing");
        }
    }

    int box_count() const {
        int s = 0;
        for (int r : rows) s += r;
        return s;
    }

    bool operator==(const YoungDiagram& o) const { return rows == o.rows; }
};

/// A superbox of the reduced diagram: 1-based (level, col).
struct Superbox {
    int level = 1;
    int col = 1;
    friend bool operator==(const Superbox& a, const Superbox& b) { return a.level == b.level && a.col == b.col; }
    friend bool operator<(const Superbox& a, const Superbox& b) {
        return a.level != b.level ? a.level < b.level : a.col < b.col;
    }
};

using SuperboxPair = std::pair<Superbox, Superbox>;

/// Reduced diagram: levels (p_i boxes of size r_i) with strictly
/// decreasing p_i.  Superboxes are ordered levels top-to-bottom, columns
/// left-to-right; that order fixes every frame and matrix layout.
struct ReducedDiagram {
    struct Level {
        int p = 0; // superboxes in the level
        int r = 0; // size of each superbox
    };
    std::vector<Level> levels;

    ReducedDiagram() = default;
    explicit ReducedDiagram(std::vector<Level> lv) : levels(std::move(lv)) {
        if (levels.empty()) throw ShapeError("ReducedDiagram: no levels");
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (levels[i].p < 1 || levels[i].r < 1) throw ShapeError("ReducedDiagram: nonpositive level data");
            if (i > 0 && levels[i].p >= levels[i - 1].p)
                throw ShapeError("ReducedDiagram: box counts must strictly decrease");
        }
    }

    int level_count() const { return static_cast<int>(levels.size()); }
    int p(int level) const { return levels[check_level(level)].p; }
    int r(int level) const { return levels[check_level(level)].r; }
    int size(const Superbox& a) const { return r(a.level); }
    bool special(const Superbox& a) const { return a.col == p(a.level); }
    bool in_first_column(const Superbox& a) const { return a.col == 1; }

    Superbox right(const Superbox& a) const {
        if (special(a)) throw ShapeError("ReducedDiagram::right: special superbox");
        return Superbox{a.level, a.col + 1};
    }
    Superbox left(const Superbox& a) const {
        if (a.col == 1) throw ShapeError("ReducedDiagram::left: first column");
        return Superbox{a.level, a.col - 1};
    }
    Superbox first_box(int level) const {
        check_level(level);
        return Superbox{level, 1};
    }
    Superbox special_box(int level) const { return Superbox{level, p(level)}; }

    std::vector<Superbox> superboxes() const {
        std::vector<Superbox> out;
        for (int i = 1; i <= level_count(); ++i)
            for (int c = 1; c <= p(i); ++c) out.push_back(Superbox{i, c});
        return out;
    }

    std::vector<Superbox> column(int c) const {
        std::vector<Superbox> out;
        for (int i = 1; i <= level_count(); ++i)
            if (p(i) >= c) out.push_back(Superbox{i, c});
        return out;
    }

    /// Total boxes of the underlying Young diagram, = half-dimension n.
    int box_count() const {
        int s = 0;
        for (const auto& l : levels) s += l.p * l.r;
        return s;
    }

    /// Number of columns before this superbox's block of E-vectors in the
    /// fixed superbox-major layout.
    int frame_offset(const Superbox& a) const {
        int off = 0;
        for (const auto& b : superboxes()) {
            if (b == a) return off;
            off += size(b);
        }
        throw ShapeError("frame_offset: superbox not in diagram");
    }

    YoungDiagram expand() const {
        std::vector<int> rows;
        for (const auto& l : levels)
            for (int k = 0; k < l.r; ++k) rows.push_back(l.p);
        return YoungDiagram(rows);
    }

    bool contains(const Superbox& a) const {
        return a.level >= 1 && a.level <= level_count() && a.col >= 1 && a.col <= p(a.level);
    }

private:
    int check_level(int level) const {
        if (level < 1 || level > level_count()) throw ShapeError("ReducedDiagram: level out of range");
        return level - 1;
    }
};

/// Group equal rows into rectangular blocks r_i x p_i.
inline ReducedDiagram reduce_diagram(const YoungDiagram& d) {
    std::vector<ReducedDiagram::Level> lv;
    for (int row : d.rows) {
        if (!lv.empty() && lv.back().p == row) {
            ++lv.back().r;
        } else {
            lv.push_back({row, 1});
        }
    }
    return ReducedDiagram(std::move(lv));
}

/// The ordered tuple of superbox pairs attached to levels j < i: starts at
/// (a_j, a_i), alternates right shifts beginning with the lower level, and
/// once the lower box is special keeps shifting the upper one.  Length is
/// p_j + p_i - 1.
inline std::vector<SuperboxPair> chain_pairs(const ReducedDiagram& delta, int i, int j) {
    if (!(1 <= j && j < i && i <= delta.level_count())) throw ShapeError("chain_pairs: need 1 <= j < i <= d");
    Superbox x{j, 1}, y{i, 1};
    std::vector<SuperboxPair> out{{x, y}};
    bool next_is_lower = true;
    while (!(delta.special(x) && delta.special(y))) {
        if (delta.special(y)) {
            x = delta.right(x);
        } else if (next_is_lower) {
            y = delta.right(y);
            next_is_lower = false;
        } else {
            x = delta.right(x);
            next_is_lower = true;
        }
        out.push_back({x, y});
    }
    return out;
}

/// Pairs whose block may be nonzero in a normal mapping: diagonal pairs,
/// same-level neighbours of size > 1, and chain pairs past the first
/// p_j - p_i - 1; closed under transposition.
inline std::set<SuperboxPair> essential_pairs(const ReducedDiagram& delta) {
    std::set<SuperboxPair> out;
    for (const auto& a : delta.superboxes()) {
        out.insert({a, a});
        if (!delta.special(a) && delta.size(a) > 1) {
            out.insert({a, delta.right(a)});
            out.insert({delta.right(a), a});
        }
    }
    for (int i = 2; i <= delta.level_count(); ++i) {
        for (int j = 1; j < i; ++j) {
            auto chain = chain_pairs(delta, i, j);
            int skip = delta.p(j) - delta.p(i) - 1;
            for (std::size_t s = static_cast<std::size_t>(skip); s < chain.size(); ++s) {
                out.insert(chain[s]);
                out.insert({chain[s].second, chain[s].first});
            }
        }
    }
    return out;
}

namespace detail {
/// Pairs allowed nonzero for a quasi-normal mapping (all chain pairs).
inline std::set<SuperboxPair> quasi_allowed_pairs(const ReducedDiagram& delta) {
    std::set<SuperboxPair> out;
    for (const auto& a : delta.superboxes()) {
        out.insert({a, a});
        if (!delta.special(a)) {
            out.insert({a, delta.right(a)});
            out.insert({delta.right(a), a});
        }
    }
    for (int i = 2; i <= delta.level_count(); ++i)
        for (int j = 1; j < i; ++j)
            for (const auto& pr : chain_pairs(delta, i, j)) {
                out.insert(pr);
                out.insert({pr.second, pr.first});
            }
    return out;
}

/// Chain pairs a normal mapping must vanish on (first p_j - p_i - 1 of
/// each tuple), closed under transposition.
inline std::set<SuperboxPair> normal_zero_pairs(const ReducedDiagram& delta) {
    std::set<SuperboxPair> out;
    for (int i = 2; i <= delta.level_count(); ++i)
        for (int j = 1; j < i; ++j) {
            auto chain = chain_pairs(delta, i, j);
            int skip = delta.p(j) - delta.p(i) - 1;
            for (int s = 0; s < skip; ++s) {
                out.insert(chain[static_cast<std::size_t>(s)]);
                out.insert({chain[static_cast<std::size_t>(s)].second, chain[static_cast<std::size_t>(s)].first});
            }
        }
    return out;
}
} // namespace detail

/// Mapping from superbox pairs to matrix jets, shape size(b) x size(a) for
/// key (a, b).  Unstored pairs read as zero.
class CompatibleMapping {
public:
    CompatibleMapping() = default;
    explicit CompatibleMapping(ReducedDiagram delta) : delta_(std::move(delta)) {}

    const ReducedDiagram& diagram() const { return delta_; }

    void set(const Superbox& a, const Superbox& b, MatrixJet m) {
        if (!delta_.contains(a) || !delta_.contains(b)) throw ShapeError("CompatibleMapping::set: superbox not in diagram");
        if (m.rows() != delta_.size(b) || m.cols() != delta_.size(a))
            throw ShapeError("CompatibleMapping::set: block shape must be size(b) x size(a)");
        blocks_[{a, b}] = std::move(m);
    }

    bool has(const Superbox& a, const Superbox& b) const { return blocks_.count({a, b}) > 0; }

    /// Block for (a, b); zero of the right shape when unset.
    MatrixJet get(const Superbox& a, const Superbox& b, int order, double center) const {
        auto it = blocks_.find({a, b});
        if (it != blocks_.end()) return it->second;
        return MatrixJet::zero(delta_.size(b), delta_.size(a), order, center);
    }

    const std::map<SuperboxPair, MatrixJet>& blocks() const { return blocks_; }

private:
    ReducedDiagram delta_;
    std::map<SuperboxPair, MatrixJet> blocks_;
};

enum class MappingStrictness { quasi_normal, normal };

struct MappingViolation {
    SuperboxPair pair;
    std::string kind; // "symmetry" | "forbidden-nonzero" | "neighbour-not-antisymmetric" | "normal-zero"
    double magnitude = 0.0;
    int jet_order = 0;
};

namespace detail {
inline std::pair<double, int> max_coeff_with_order(const MatrixJet& m) {
    double best = 0.0;
    int where = 0;
    for (int k = 0; k <= m.order(); ++k) {
        double v = m.coeff(k).size() > 0 ? m.coeff(k).cwiseAbs().maxCoeff() : 0.0;
        if (v > best) {
            best = v;
            where = k;
        }
    }
    return {best, where};
}
} // namespace detail

/// Check a symmetric compatible mapping against the quasi-normal or normal
/// block pattern.  Shape problems throw; pattern failures are returned.
inline bool validate_mapping(const CompatibleMapping& R, const ReducedDiagram& delta, MappingStrictness strictness,
                             double tol, std::vector<MappingViolation>* violations = nullptr) {
    std::vector<MappingViolation> out;
    double scale = 1.0;
    for (const auto& [pr, m] : R.blocks()) {
        if (!delta.contains(pr.first) || !delta.contains(pr.second))
            throw ShapeError("validate_mapping: block on superbox outside diagram");
        if (m.rows() != delta.size(pr.second) || m.cols() != delta.size(pr.first))
            throw ShapeError("validate_mapping: block shape violates compatibility");
        scale = std::max(scale, m.max_abs_coeff());
    }

    auto push = [&](const SuperboxPair& pr, const char* kind, const MatrixJet& m) {
        auto [mag, ord] = detail::max_coeff_with_order(m);
        if (mag > tol * scale) out.push_back({pr, kind, mag, ord});
    };

    // symmetry R(b, a) = R(a, b)^T
    for (const auto& [pr, m] : R.blocks()) {
        MatrixJet other = R.get(pr.second, pr.first, m.order(), m.center());
        push(pr, "symmetry", other - m.transpose());
    }

    const auto allowed = detail::quasi_allowed_pairs(delta);
    for (const auto& [pr, m] : R.blocks()) {
        if (!allowed.count(pr)) {
            push(pr, "forbidden-nonzero", m);
        }
        if (!delta.special(pr.first) && pr.second == delta.right(pr.first)) {
            push(pr, "neighbour-not-antisymmetric", m + m.transpose());
        }
    }
    if (strictness == MappingStrictness::normal) {
        const auto zeros = detail::normal_zero_pairs(delta);
        for (const auto& [pr, m] : R.blocks())
            if (zeros.count(pr)) push(pr, "normal-zero", m);
    }

    bool ok = out.empty();
    if (violations) *violations = std::move(out);
    return ok;
}

} // namespace lgc
