#pragma once

// Combinatorial skeleton of the heptagrid: the Fibonacci sequence, the
// two-colour son rule (black nodes have 2 sons, white nodes 3), tree
// coordinates with breadth-first numbering, quarters, bars and the
// quarter decomposition identity.

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace interwoven::fib {

using std::int64_t;

enum class NodeColor : std::uint8_t { Black, White };

inline int arity(NodeColor c) { return c == NodeColor::Black ? 2 : 3; }

inline const char* to_string(NodeColor c) {
    return c == NodeColor::Black ? "black" : "white";
}

// Son rule: the black son comes first.
inline std::span<const NodeColor> son_colors(NodeColor c) {
    static constexpr std::array<NodeColor, 2> black_sons{NodeColor::Black, NodeColor::White};
    static constexpr std::array<NodeColor, 3> white_sons{NodeColor::Black, NodeColor::White,
                                                         NodeColor::White};
    if (c == NodeColor::Black) return {black_sons.data(), black_sons.size()};
    return {white_sons.data(), white_sons.size()};
}

// f(-1) = 0, f(0) = f(1) = 1, f(k+1) = f(k) + f(k-1). Exact; throws once the
// value leaves the 64-bit range (first at k = 92).
inline int64_t fib(int k) {
    if (k < -1) throw std::domain_error("fib: k must be >= -1");
    int64_t a = 0, b = 1;  // f(-1), f(0)
    for (int t = 0; t <= k; ++t) {
        int64_t c = 0;
        if (__builtin_add_overflow(a, b, &c))
            throw std::overflow_error("fib: value exceeds 64-bit range");
        a = b;
        b = c;
    }
    return a;
}

inline bool is_fibonacci_number(int64_t x) {
    if (x < 0) return false;
    for (int k = -1;; ++k) {
        int64_t f;
        try {
            f = fib(k);
        } catch (const std::overflow_error&) {
            return false;
        }
        if (f == x) return true;
        if (f > x) return false;
    }
}

// Per-level node counts below a root of the given colour.
// White root: level n holds (f(2n-1), f(2n)); black root: (f(2n-2), f(2n-1)).
inline std::pair<int64_t, int64_t> level_counts(NodeColor root, int n) {
    if (n < 0) throw std::domain_error("level_counts: n must be >= 0");
    int64_t black = root == NodeColor::Black ? 1 : 0;
    int64_t white = root == NodeColor::White ? 1 : 0;
    for (int l = 0; l < n; ++l) {
        int64_t b2 = black + white;       // every node has exactly one black son
        int64_t w2 = black + 2 * white;   // black: 1 white son, white: 2
        black = b2;
        white = w2;
    }
    return {black, white};
}

// Path from a root of colour `root`; entry j picks the j-th son (0-based).
struct TreeAddress {
    NodeColor root = NodeColor::White;
    std::vector<std::uint8_t> path;

    int level() const { return static_cast<int>(path.size()); }

    NodeColor color() const {
        NodeColor c = root;
        for (auto j : path) {
            auto sons = son_colors(c);
            if (j >= sons.size()) throw std::domain_error("TreeAddress: child index out of range");
            c = sons[j];
        }
        return c;
    }

    bool operator==(const TreeAddress&) const = default;
};

// An explicitly enumerated Fibonacci tree. Nodes are numbered breadth first,
// level by level, left to right, root = 1.
class FibTree {
public:
    FibTree(NodeColor root, int levels) : root_(root), levels_(levels) {
        if (levels < 1) throw std::domain_error("FibTree: levels must be >= 1");
        int64_t total = 0;
        level_start_.reserve(levels + 1);
        for (int l = 0; l < levels; ++l) {
            auto [b, w] = level_counts(root, l);
            level_start_.push_back(total + 1);
            total += b + w;
        }
        level_start_.push_back(total + 1);

        color_.assign(total + 1, root);
        parent_.assign(total + 1, 0);
        first_child_.assign(total + 1, 0);
        level_.assign(total + 1, 0);

        color_[1] = root;
        int64_t next = 2;
        for (int64_t i = 1; i <= total; ++i) {
            if (i >= level_start_[levels - 1]) break;  // last level has no children
            first_child_[i] = next;
            for (NodeColor sc : son_colors(color_[i])) {
                color_[next] = sc;
                parent_[next] = i;
                level_[next] = level_[i] + 1;
                ++next;
            }
        }
    }

    NodeColor root_color() const { return root_; }
    int levels() const { return levels_; }
    int64_t size() const { return static_cast<int64_t>(color_.size()) - 1; }

    bool valid_index(int64_t i) const { return i >= 1 && i <= size(); }

    NodeColor color(int64_t i) const { return color_[check(i)]; }
    int64_t parent(int64_t i) const { return parent_[check(i)]; }
    int level(int64_t i) const { return level_[check(i)]; }

    int64_t child(int64_t i, int j) const {
        check(i);
        if (first_child_[i] == 0) throw std::domain_error("FibTree: node has no children");
        if (j < 0 || j >= arity(color_[i]))
            throw std::domain_error("FibTree: child index out of range");
        return first_child_[i] + j;
    }

    int64_t level_begin(int l) const { return level_start_.at(l); }
    int64_t level_end(int l) const { return level_start_.at(l + 1); }

    int64_t index_of(const TreeAddress& a) const {
        if (a.root != root_) throw std::domain_error("FibTree: address root colour mismatch");
        if (a.level() >= levels_) throw std::domain_error("FibTree: address deeper than tree");
        int64_t node = 1;
        for (auto j : a.path) node = child(node, j);
        return node;
    }

    TreeAddress address_of(int64_t index) const {
        check(index);
        TreeAddress a{root_, {}};
        std::vector<std::uint8_t> rev;
        int64_t node = index;
        while (node != 1) {
            int64_t p = parent_[node];
            rev.push_back(static_cast<std::uint8_t>(node - first_child_[p]));
            node = p;
        }
        a.path.assign(rev.rbegin(), rev.rend());
        return a;
    }

private:
    int64_t check(int64_t i) const {
        if (!valid_index(i)) throw std::domain_error("FibTree: index out of tree");
        return i;
    }

    NodeColor root_;
    int levels_;
    std::vector<NodeColor> color_;
    std::vector<int64_t> parent_;
    std::vector<int64_t> first_child_;
    std::vector<int> level_;
    std::vector<int64_t> level_start_;
};

inline int64_t bfs_index(const TreeAddress& a) {
    FibTree t(a.root, a.level() + 1);
    return t.index_of(a);
}

inline TreeAddress address_of_index(NodeColor root, int64_t index) {
    if (index < 1) throw std::domain_error("address_of_index: index must be >= 1");
    int levels = 1;
    int64_t total = 1;
    while (total < index) {
        auto [b, w] = level_counts(root, levels);
        total += b + w;
        ++levels;
    }
    FibTree t(root, levels);
    return t.address_of(index);
}

// First n levels of a white tree (quarter) or a black tree (bar).
struct Quarter {
    int depth = 1;
};
struct Bar {
    int depth = 1;
};

inline int64_t quarter_size(int n) {
    if (n < 1) throw std::domain_error("quarter_size: n must be >= 1");
    return fib(2 * n) - 1;
}

inline int64_t bar_size(int n) {
    if (n < 1) throw std::domain_error("bar_size: n must be >= 1");
    return fib(2 * n - 1);
}

// Splitting of a quarter of depth n+m into the quarter of depth n, one
// quarter of depth m per white level-n node and one bar of depth m per
// black level-n node.
struct SlotPlacement {
    TreeAddress anchor;
    int depth = 1;
};

struct Decomposition {
    int n = 1;
    int m = 1;
    std::vector<SlotPlacement> white_slots;
    std::vector<SlotPlacement> black_slots;
};

inline Decomposition split_quarter(int n, int m) {
    if (n < 1 || m < 1) throw std::domain_error("split_quarter: n and m must be >= 1");
    FibTree t(NodeColor::White, n + 1);
    Decomposition d{n, m, {}, {}};
    for (int64_t i = t.level_begin(n); i < t.level_end(n); ++i) {
        SlotPlacement slot{t.address_of(i), m};
        if (t.color(i) == NodeColor::White)
            d.white_slots.push_back(std::move(slot));
        else
            d.black_slots.push_back(std::move(slot));
    }
    return d;
}

struct PartitionReport {
    bool ok = true;
    int64_t covered = 0;
    int64_t expected = 0;
    std::vector<std::string> findings;
};

// Checks that the decomposition regions partition the quarter of depth n+m
// exactly, with slot counts (f(2n), f(2n-1)) and the counting identity.
inline PartitionReport verify_decomposition(const Decomposition& d) {
    PartitionReport rep;
    const int total_levels = d.n + d.m;
    FibTree t(NodeColor::White, total_levels);
    rep.expected = t.size();
    std::vector<std::uint8_t> marks(t.size() + 1, 0);

    auto mark_block = [&](int64_t root, int depth, const char* what) {
        std::vector<int64_t> frontier{root};
        for (int l = 0; l < depth; ++l) {
            std::vector<int64_t> next;
            for (int64_t node : frontier) {
                if (++marks[node] > 1)
                    rep.findings.push_back(std::string("tile covered twice: index ") +
                                           std::to_string(node) + " by " + what);
                if (l + 1 < depth)
                    for (int j = 0; j < arity(t.color(node)); ++j)
                        next.push_back(t.child(node, j));
            }
            frontier = std::move(next);
        }
    };

    mark_block(1, d.n, "base quarter");
    for (const auto& s : d.white_slots) mark_block(t.index_of(s.anchor), s.depth, "white slot");
    for (const auto& s : d.black_slots) mark_block(t.index_of(s.anchor), s.depth, "black slot");

    for (int64_t i = 1; i <= t.size(); ++i) {
        if (marks[i] == 1) ++rep.covered;
        if (marks[i] == 0)
            rep.findings.push_back("tile uncovered: index " + std::to_string(i));
    }

    if (static_cast<int64_t>(d.white_slots.size()) != fib(2 * d.n))
        rep.findings.push_back("white slot count != f(2n)");
    if (static_cast<int64_t>(d.black_slots.size()) != fib(2 * d.n - 1))
        rep.findings.push_back("black slot count != f(2n-1)");

    // f(2(n+m)) - 1 = (f(2n) - 1) + f(2n)*(f(2m) - 1) + f(2n-1)*f(2m-1)
    int64_t lhs = quarter_size(d.n + d.m);
    int64_t rhs = quarter_size(d.n) + fib(2 * d.n) * quarter_size(d.m) +
                  fib(2 * d.n - 1) * bar_size(d.m);
    if (lhs != rhs) rep.findings.push_back("counting identity failed");

    rep.ok = rep.findings.empty() && rep.covered == rep.expected;
    return rep;
}

// The white node on the last level whose breadth-first index is a Fibonacci
// number. Two Fibonacci indices fall in the last level's range; the leftmost
// of them is the all-black-son chain, so the white one is unique for
// depth >= 2. If both were white the larger index would win.
inline TreeAddress junction_point(const Quarter& q) {
    if (q.depth < 2) throw std::domain_error("junction_point: depth must be >= 2");
    FibTree t(NodeColor::White, q.depth);
    const int last = q.depth - 1;
    int64_t chosen = 0;
    for (int64_t i = t.level_begin(last); i < t.level_end(last); ++i) {
        if (!is_fibonacci_number(i)) continue;
        if (t.color(i) == NodeColor::White && i > chosen) chosen = i;
    }
    if (chosen == 0)
        throw std::runtime_error("junction_point: no white Fibonacci-indexed node on last level");
    return t.address_of(chosen);
}

inline nlohmann::json dump_tree(const FibTree& t) {
    nlohmann::json nodes = nlohmann::json::array();
    for (int64_t i = 1; i <= t.size(); ++i) {
        nodes.push_back({{"index", i},
                         {"level", t.level(i)},
                         {"color", to_string(t.color(i))},
                         {"parent_index", t.parent(i)}});
    }
    return {{"format", 1},
            {"root_color", to_string(t.root_color())},
            {"depth", t.levels()},
            {"nodes", std::move(nodes)}};
}

}  // namespace interwoven::fib
