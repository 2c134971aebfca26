#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "markoff/core/error.hpp"
#include "markoff/core/rational.hpp"

namespace markoff {

/// True iff x, y, z are positive and x^2 + y^2 + z^2 = xyz.
inline bool is_markoff(const BigInt& x, const BigInt& y, const BigInt& z) {
    if (x <= 0 || y <= 0 || z <= 0) return false;
    return x * x + y * y + z * z == x * y * z;
}

/// A vertex of the Markoff tree in normalized form: sorted components, each a
/// multiple of 3, solving x^2 + y^2 + z^2 = xyz.
class MarkoffTriple {
public:
    /// Sorts and validates; throws invalid_triple.
    static MarkoffTriple from(BigInt a, BigInt b, BigInt c) {
        std::array<BigInt, 3> v{std::move(a), std::move(b), std::move(c)};
        std::sort(v.begin(), v.end());
        if (!is_markoff(v[0], v[1], v[2]))
            throw invalid_triple("(" + to_string(v[0]) + "," + to_string(v[1]) + "," +
                                 to_string(v[2]) + ") is not a Markoff triple");
        // every positive solution is 3x a classical one, but keep the check explicit
        for (const auto& x : v)
            if (!divides(BigInt(3), x)) throw invalid_triple("component not divisible by 3");
        return MarkoffTriple(v[0], v[1], v[2]);
    }

    static MarkoffTriple root() { return MarkoffTriple(3, 3, 3); }

    const BigInt& x() const { return x_; }
    const BigInt& y() const { return y_; }
    const BigInt& z() const { return z_; }
    const BigInt& dominant() const { return z_; }
    bool is_root() const { return z_ == 3; }

    std::string str() const {
        return "(" + to_string(x_) + "," + to_string(y_) + "," + to_string(z_) + ")";
    }

    friend bool operator==(const MarkoffTriple& a, const MarkoffTriple& b) {
        return a.x_ == b.x_ && a.y_ == b.y_ && a.z_ == b.z_;
    }

    /// Ascending (z, y, x) order.
    friend bool operator<(const MarkoffTriple& a, const MarkoffTriple& b) {
        if (a.z_ != b.z_) return a.z_ < b.z_;
        if (a.y_ != b.y_) return a.y_ < b.y_;
        return a.x_ < b.x_;
    }

private:
    MarkoffTriple(BigInt x, BigInt y, BigInt z) : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)) {}

    BigInt x_, y_, z_;
};

/// LEFT keeps {x, z} (replaces y), RIGHT keeps {y, z} (replaces x).
enum class Branch { left, right };

struct BranchWord {
    std::vector<Branch> steps;

    std::string str() const {
        std::string s;
        s.reserve(steps.size());
        for (auto b : steps) s += (b == Branch::left ? 'L' : 'R');
        return s;
    }

    static BranchWord parse(std::string_view text) {
        BranchWord w;
        for (char ch : text) {
            if (ch == 'L' || ch == 'l') w.steps.push_back(Branch::left);
            else if (ch == 'R' || ch == 'r') w.steps.push_back(Branch::right);
            else throw parse_error(std::string("branch word contains '") + ch + "'");
        }
        return w;
    }

    friend bool operator==(const BranchWord&, const BranchWord&) = default;
};

inline MarkoffTriple child(const MarkoffTriple& t, Branch b) {
    if (b == Branch::left) return MarkoffTriple::from(t.x(), t.z(), t.x() * t.z() - t.y());
    return MarkoffTriple::from(t.y(), t.z(), t.y() * t.z() - t.x());
}

/// Distinct children, ascending. The root and (3,3,6) have a single child.
inline std::vector<MarkoffTriple> children(const MarkoffTriple& t) {
    MarkoffTriple l = child(t, Branch::left);
    MarkoffTriple r = child(t, Branch::right);
    if (l == r) return {l};
    if (r < l) std::swap(l, r);
    return {l, r};
}

inline bool has_single_child(const MarkoffTriple& t) { return t.x() == t.y(); }

inline MarkoffTriple parent(const MarkoffTriple& t) {
    if (t.is_root()) throw root_has_no_parent("(3,3,3) is the root of the Markoff tree");
    return MarkoffTriple::from(t.x(), t.y(), t.x() * t.y() - t.z());
}

/// Canonical word addressing t: at single-child vertices the step is LEFT.
inline BranchWord path_of(const MarkoffTriple& t) {
    BranchWord w;
    MarkoffTriple cur = t;
    while (!cur.is_root()) {
        MarkoffTriple p = parent(cur);
        w.steps.push_back(child(p, Branch::left) == cur ? Branch::left : Branch::right);
        cur = p;
    }
    std::reverse(w.steps.begin(), w.steps.end());
    return w;
}

/// Replays a word from the root. RIGHT at a single-child vertex is rejected so
/// every vertex has exactly one accepted word.
inline MarkoffTriple replay(const BranchWord& w) {
    MarkoffTriple cur = MarkoffTriple::root();
    for (std::size_t i = 0; i < w.steps.size(); ++i) {
        if (w.steps[i] == Branch::right && has_single_child(cur))
            throw invalid_path("step " + std::to_string(i) + ": " + cur.str() +
                               " has a single child, use L");
        MarkoffTriple next = child(cur, w.steps[i]);
        if (next.dominant() <= cur.dominant())
            throw invalid_path("step " + std::to_string(i) + " does not move away from the root");
        cur = std::move(next);
    }
    return cur;
}

struct TreeRecord {
    MarkoffTriple triple;
    BranchWord path;
};

namespace detail {

inline void expand_below(std::vector<TreeRecord> work, const BigInt& bound, std::vector<TreeRecord>& out) {
    while (!work.empty()) {
        TreeRecord rec = std::move(work.back());
        work.pop_back();
        const MarkoffTriple& t = rec.triple;
        for (Branch b : {Branch::left, Branch::right}) {
            if (b == Branch::right && has_single_child(t)) continue;
            MarkoffTriple c = child(t, b);
            if (c.dominant() > bound) continue;
            TreeRecord next{c, rec.path};
            next.path.steps.push_back(b);
            work.push_back(std::move(next));
        }
        out.push_back(std::move(rec));
    }
}

} // namespace detail

/// Every triple with dominant <= bound, each once, ascending (z, y, x), with its
/// canonical path. Children are pruned as soon as their dominant exceeds the
/// bound (dominants strictly increase along the tree). With workers > 1 the
/// frontier is split into independent subtrees; the merge is a sort, so the
/// result does not depend on the worker count.
inline std::vector<TreeRecord> enumerate_records(const BigInt& bound, unsigned workers = 1) {
    std::vector<TreeRecord> out;
    if (bound < 3) return out;
    std::vector<TreeRecord> frontier{{MarkoffTriple::root(), {}}};

    if (workers <= 1) {
        detail::expand_below(std::move(frontier), bound, out);
    } else {
        // grow a frontier of independent subtree roots breadth-first
        while (!frontier.empty() && frontier.size() < 4 * workers) {
            std::vector<TreeRecord> next;
            for (auto& rec : frontier) {
                for (Branch b : {Branch::left, Branch::right}) {
                    if (b == Branch::right && has_single_child(rec.triple)) continue;
                    MarkoffTriple c = child(rec.triple, b);
                    if (c.dominant() > bound) continue;
                    TreeRecord n{c, rec.path};
                    n.path.steps.push_back(b);
                    next.push_back(std::move(n));
                }
                out.push_back(std::move(rec));
            }
            frontier = std::move(next);
        }
        std::vector<std::vector<TreeRecord>> parts(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            std::vector<TreeRecord> mine;
            for (std::size_t i = w; i < frontier.size(); i += workers) mine.push_back(frontier[i]);
            pool.emplace_back([&parts, w, &bound, mine = std::move(mine)]() mutable {
                detail::expand_below(std::move(mine), bound, parts[w]);
            });
        }
        for (auto& th : pool) th.join();
        for (auto& p : parts)
            for (auto& rec : p) out.push_back(std::move(rec));
    }
    std::sort(out.begin(), out.end(),
              [](const TreeRecord& a, const TreeRecord& b) { return a.triple < b.triple; });
    return out;
}

inline std::vector<MarkoffTriple> enumerate_below(const BigInt& bound, unsigned workers = 1) {
    std::vector<MarkoffTriple> out;
    for (auto& rec : enumerate_records(bound, workers)) out.push_back(std::move(rec.triple));
    return out;
}

struct UniquenessReport {
    BigInt bound;
    std::size_t triple_count = 0;
    /// dominant -> every enumerated triple with that dominant
    std::vector<std::pair<BigInt, std::vector<MarkoffTriple>>> dominants;
    bool unique = true;
};

inline UniquenessReport verify_uniqueness(const BigInt& bound, unsigned workers = 1) {
    UniquenessReport rep;
    rep.bound = bound;
    auto triples = enumerate_below(bound, workers);
    rep.triple_count = triples.size();
    for (auto& t : triples) {
        if (rep.dominants.empty() || rep.dominants.back().first != t.dominant())
            rep.dominants.push_back({t.dominant(), {}});
        rep.dominants.back().second.push_back(t);
    }
    for (const auto& [z, ts] : rep.dominants)
        if (ts.size() != 1) rep.unique = false;
    return rep;
}

using ClassicalTriple = std::array<BigInt, 3>;

inline ClassicalTriple to_classical(const MarkoffTriple& t) {
    return {exact_div(t.x(), 3), exact_div(t.y(), 3), exact_div(t.z(), 3)};
}

/// Inverse of to_classical; requires a^2 + b^2 + c^2 = 3abc with positive entries.
inline MarkoffTriple from_classical(const ClassicalTriple& c) {
    for (const auto& v : c)
        if (v <= 0) throw invalid_classical_triple("classical components must be positive");
    if (c[0] * c[0] + c[1] * c[1] + c[2] * c[2] != 3 * c[0] * c[1] * c[2])
        throw invalid_classical_triple("(" + to_string(c[0]) + "," + to_string(c[1]) + "," +
                                       to_string(c[2]) + ") does not solve a^2+b^2+c^2 = 3abc");
    return MarkoffTriple::from(3 * c[0], 3 * c[1], 3 * c[2]);
}

} // namespace markoff
