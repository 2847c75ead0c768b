#ifndef IPL_WARNING_TREE_HPP
#define IPL_WARNING_TREE_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ipl/common.hpp"
#include "ipl/multi_index.hpp"

namespace ipl {

/// Depth-limited binary rule tree over a fixed pool of ranked monomial
/// terms. Internal nodes send a row left when its term value is <= the
/// threshold; leaves carry -1 (normal) or 1 (abnormal).
struct WarningTree {
    struct Node {
        bool is_leaf = true;
        double label = 1.0;
        int pool_index = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
    };

    std::vector<Node> nodes; // nodes[0] is the root; empty means untrained
    int depth = 0;           // depth limit the tree was built with
    int min_leaf = 5;
    std::vector<MultiIndex> pool_terms;
    std::vector<std::string> pool_names;

    double classify_row(const Eigen::Ref<const VectorXd>& term_values) const {
        if (nodes.empty()) throw ConfigError("WarningTree: empty tree");
        check_same_size(term_values.size(), static_cast<Eigen::Index>(pool_terms.size()),
                        "WarningTree::classify_row");
        int i = 0;
        while (!nodes[static_cast<std::size_t>(i)].is_leaf) {
            const Node& nd = nodes[static_cast<std::size_t>(i)];
            i = term_values(nd.pool_index) <= nd.threshold ? nd.left : nd.right;
        }
        return nodes[static_cast<std::size_t>(i)].label;
    }

    VectorXd classify(const MatrixXd& term_values) const {
        VectorXd out(term_values.rows());
        for (Eigen::Index r = 0; r < term_values.rows(); ++r)
            out(r) = classify_row(term_values.row(r).transpose());
        return out;
    }
};

namespace detail {

inline double gini(Eigen::Index n_pos, Eigen::Index n_neg) {
    const double n = static_cast<double>(n_pos + n_neg);
    if (n == 0) return 0.0;
    const double p = static_cast<double>(n_pos) / n;
    const double q = static_cast<double>(n_neg) / n;
    return 1.0 - p * p - q * q;
}

} // namespace detail

/// Greedy induction: each node takes the (pool term, midpoint threshold)
/// pair with the lowest weighted child Gini impurity, considering only
/// splits that leave at least min_leaf rows on each side and strictly
/// reduce impurity. Recursion stops at the depth limit, on pure nodes, or
/// when no admissible split remains. Leaf labels are the majority class,
/// with ties going to 1 - a missed alarm costs more than a false one.
/// Candidates are scanned in pool order and ascending threshold, first
/// strict improvement kept, so induction is deterministic.
inline WarningTree build_warning_tree(const Eigen::Ref<const MatrixXd>& term_values,
                                      const Eigen::Ref<const VectorXd>& labels,
                                      const std::vector<MultiIndex>& pool_terms,
                                      const std::vector<std::string>& pool_names, int depth,
                                      int min_leaf = 5) {
    if (depth < 0) throw ConfigError("build_warning_tree: depth must be >= 0");
    if (min_leaf < 1) throw ConfigError("build_warning_tree: min_leaf must be >= 1");
    if (pool_terms.empty() || pool_terms.size() != pool_names.size())
        throw ConfigError("build_warning_tree: pool terms and names must be non-empty and match");
    check_same_size(term_values.cols(), static_cast<Eigen::Index>(pool_terms.size()),
                    "build_warning_tree: pool");
    check_same_size(term_values.rows(), labels.size(), "build_warning_tree: labels");
    if (term_values.rows() == 0) throw ConfigError("build_warning_tree: no training rows");
    check_finite(term_values, "build_warning_tree: term values");
    for (Eigen::Index i = 0; i < labels.size(); ++i)
        if (labels(i) != 1.0 && labels(i) != -1.0)
            throw ConfigError("build_warning_tree: label at row " + std::to_string(i + 1) +
                              " is not -1 or 1");

    WarningTree tree;
    tree.depth = depth;
    tree.min_leaf = min_leaf;
    tree.pool_terms = pool_terms;
    tree.pool_names = pool_names;

    auto build = [&](auto&& self, std::vector<Eigen::Index> rows, int depth_left) -> int {
        Eigen::Index n_pos = 0;
        for (Eigen::Index r : rows)
            if (labels(r) == 1.0) ++n_pos;
        const Eigen::Index n_neg = static_cast<Eigen::Index>(rows.size()) - n_pos;

        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(node_id)].label = n_pos >= n_neg ? 1.0 : -1.0;

        const double node_gini = detail::gini(n_pos, n_neg);
        if (depth_left == 0 || node_gini == 0.0 ||
            static_cast<Eigen::Index>(rows.size()) < 2 * min_leaf)
            return node_id;

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_cost = node_gini - 1e-12; // only strict improvements split
        const double n_total = static_cast<double>(rows.size());

        for (int f = 0; f < static_cast<int>(pool_terms.size()); ++f) {
            std::vector<Eigen::Index> order = rows;
            std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
                return term_values(a, f) < term_values(b, f);
            });
            Eigen::Index left_pos = 0, left_n = 0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                ++left_n;
                if (labels(order[i]) == 1.0) ++left_pos;
                const double lo = term_values(order[i], f);
                const double hi = term_values(order[i + 1], f);
                if (lo == hi) continue; // no boundary between equal values
                const Eigen::Index right_n = static_cast<Eigen::Index>(order.size()) - left_n;
                if (left_n < min_leaf || right_n < min_leaf) continue;
                const double cost =
                    (static_cast<double>(left_n) * detail::gini(left_pos, left_n - left_pos) +
                     static_cast<double>(right_n) * detail::gini(n_pos - left_pos,
                                                                 right_n - (n_pos - left_pos))) /
                    n_total;
                if (cost < best_cost) {
                    best_cost = cost;
                    best_feature = f;
                    best_threshold = 0.5 * (lo + hi);
                }
            }
        }
        if (best_feature < 0) return node_id;

        std::vector<Eigen::Index> left_rows, right_rows;
        for (Eigen::Index r : rows)
            (term_values(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);

        const int left_id = self(self, std::move(left_rows), depth_left - 1);
        const int right_id = self(self, std::move(right_rows), depth_left - 1);
        auto& nd = tree.nodes[static_cast<std::size_t>(node_id)];
        nd.is_leaf = false;
        nd.pool_index = best_feature;
        nd.threshold = best_threshold;
        nd.left = left_id;
        nd.right = right_id;
        return node_id;
    };

    std::vector<Eigen::Index> all(static_cast<std::size_t>(term_values.rows()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Eigen::Index>(i);
    build(build, std::move(all), depth);
    return tree;
}

/// Confusion counts and the derived scores for the alarm class (+1).
/// A degenerate denominator reports 0 with its defined-flag cleared.
struct WarningMetrics {
    long tp = 0, fp = 0, tn = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0, accuracy = 0.0;
    bool precision_defined = true, recall_defined = true, f1_defined = true;
};

inline WarningMetrics confusion_metrics(long tp, long fp, long tn, long fn) {
    if (tp < 0 || fp < 0 || tn < 0 || fn < 0)
        throw ConfigError("confusion_metrics: negative count");
    if (tp + fp + tn + fn == 0) throw ConfigError("confusion_metrics: empty confusion matrix");
    WarningMetrics m;
    m.tp = tp;
    m.fp = fp;
    m.tn = tn;
    m.fn = fn;
    if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    else m.precision_defined = false;
    if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    else m.recall_defined = false;
    if (m.precision_defined && m.recall_defined && m.precision + m.recall > 0)
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    else m.f1_defined = false;
    m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(tp + fp + tn + fn);
    return m;
}

inline WarningMetrics evaluate_warning(const WarningTree& tree, const MatrixXd& term_values,
                                       const Eigen::Ref<const VectorXd>& labels) {
    check_same_size(term_values.rows(), labels.size(), "evaluate_warning");
    if (term_values.rows() == 0) throw ConfigError("evaluate_warning: empty test set");
    long tp = 0, fp = 0, tn = 0, fn = 0;
    for (Eigen::Index r = 0; r < term_values.rows(); ++r) {
        if (labels(r) != 1.0 && labels(r) != -1.0)
            throw ConfigError("evaluate_warning: label at row " + std::to_string(r + 1) +
                              " is not -1 or 1");
        const double pred = tree.classify_row(term_values.row(r).transpose());
        if (pred == 1.0) (labels(r) == 1.0 ? tp : fp) += 1;
        else (labels(r) == 1.0 ? fn : tn) += 1;
    }
    return confusion_metrics(tp, fp, tn, fn);
}

/// One maximal run of correctly flagged abnormal steps: the tree said 1 and
/// the truth was 1 for `length` consecutive rows starting at `start`.
/// follows_normal marks runs entered from a normal (-1) ground-truth state,
/// the transitions an early-warning system exists to catch.
struct WarningEpisode {
    Eigen::Index start = 0;
    Eigen::Index length = 0; // the consecutive-step horizon T_n
    bool follows_normal = false;
};

inline std::vector<WarningEpisode> consecutive_warning_horizon(
    const Eigen::Ref<const VectorXd>& predictions, const Eigen::Ref<const VectorXd>& truth) {
    check_same_size(predictions.size(), truth.size(), "consecutive_warning_horizon");
    std::vector<WarningEpisode> out;
    Eigen::Index r = 0;
    while (r < truth.size()) {
        if (predictions(r) == 1.0 && truth(r) == 1.0) {
            WarningEpisode ep;
            ep.start = r;
            ep.follows_normal = r > 0 && truth(r - 1) == -1.0;
            while (r < truth.size() && predictions(r) == 1.0 && truth(r) == 1.0) ++r;
            ep.length = r - ep.start;
            out.push_back(ep);
        } else {
            ++r;
        }
    }
    return out;
}

inline std::vector<WarningEpisode> consecutive_warning_horizon(
    const WarningTree& tree, const MatrixXd& term_values,
    const Eigen::Ref<const VectorXd>& truth) {
    return consecutive_warning_horizon(tree.classify(term_values), truth);
}

namespace detail {

inline std::string format_threshold(double v, int precision) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

} // namespace detail

/// One line per root-to-leaf path (left paths first), e.g.
///   IF x2[t]*x3[t] <= 91.0 AND x1[t] > 0.5 THEN abnormal
/// Thresholds are printed with `precision` significant digits (default 6).
inline std::string render_rules(const WarningTree& tree, int precision = 6) {
    if (tree.nodes.empty()) throw ConfigError("render_rules: empty tree");
    if (precision < 1 || precision > 17)
        throw ConfigError("render_rules: precision must be in [1, 17]");
    std::string out;
    std::vector<std::string> conditions;
    auto walk = [&](auto&& self, int id) -> void {
        const auto& nd = tree.nodes[static_cast<std::size_t>(id)];
        if (nd.is_leaf) {
            std::string line;
            if (!conditions.empty()) {
                line = "IF ";
                for (std::size_t i = 0; i < conditions.size(); ++i) {
                    if (i > 0) line += " AND ";
                    line += conditions[i];
                }
                line += ' ';
            }
            line += "THEN ";
            line += nd.label == 1.0 ? "abnormal" : "normal";
            out += line;
            out += '\n';
            return;
        }
        const std::string& name = tree.pool_names[static_cast<std::size_t>(nd.pool_index)];
        const std::string thr = detail::format_threshold(nd.threshold, precision);
        conditions.push_back(name + " <= " + thr);
        self(self, nd.left);
        conditions.back() = name + " > " + thr;
        self(self, nd.right);
        conditions.pop_back();
    };
    walk(walk, 0);
    return out;
}

/// Rebuilds a tree from render_rules output. The rendered thresholds are
/// what the parsed tree uses, so a rendering precision coarser than the
/// data spacing can move points across a boundary; render with enough
/// digits when an exact round trip matters.
inline WarningTree parse_rules(const std::string& text,
                               const std::vector<MultiIndex>& pool_terms,
                               const std::vector<std::string>& pool_names) {
    if (pool_terms.size() != pool_names.size())
        throw ConfigError("parse_rules: pool terms and names must match");

    WarningTree tree;
    tree.pool_terms = pool_terms;
    tree.pool_names = pool_names;
    tree.min_leaf = 1;

    enum class State { Unset, Internal, Leaf };
    std::vector<State> states;

    auto new_node = [&]() {
        tree.nodes.emplace_back();
        states.push_back(State::Unset);
        return static_cast<int>(tree.nodes.size()) - 1;
    };
    new_node(); // root

    auto pool_index_of = [&](const std::string& name) {
        for (std::size_t i = 0; i < pool_names.size(); ++i)
            if (pool_names[i] == name) return static_cast<int>(i);
        throw ConfigError("parse_rules: term '" + name + "' is not in the pool");
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    int max_depth = 0;
    bool any_line = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        any_line = true;

        const auto fail = [&](const std::string& why) {
            throw ConfigError("parse_rules: line " + std::to_string(line_no) + ": " + why);
        };

        const std::size_t then_at = line.rfind("THEN ");
        if (then_at == std::string::npos) fail("missing THEN");
        const std::string label_text = line.substr(then_at + 5);
        double label = 0.0;
        if (label_text == "abnormal") label = 1.0;
        else if (label_text == "normal") label = -1.0;
        else fail("unknown label '" + label_text + "'");

        std::vector<std::string> conds;
        if (then_at > 0) {
            if (line.rfind("IF ", 0) != 0) fail("expected IF");
            std::string all = line.substr(3, then_at - 3 - 1);
            std::size_t p = 0;
            while (true) {
                const std::size_t at = all.find(" AND ", p);
                if (at == std::string::npos) {
                    conds.push_back(all.substr(p));
                    break;
                }
                conds.push_back(all.substr(p, at - p));
                p = at + 5;
            }
        }
        max_depth = std::max(max_depth, static_cast<int>(conds.size()));

        int node = 0;
        for (const std::string& cond : conds) {
            bool is_left = true;
            std::size_t op_at = cond.find(" <= ");
            std::size_t op_len = 4;
            if (op_at == std::string::npos) {
                op_at = cond.find(" > ");
                op_len = 3;
                is_left = false;
            }
            if (op_at == std::string::npos) fail("condition '" + cond + "' has no comparison");
            const std::string name = cond.substr(0, op_at);
            const double threshold = parse_double(cond.substr(op_at + op_len), "parse_rules");
            const int pi = pool_index_of(name);

            if (states[static_cast<std::size_t>(node)] == State::Unset) {
                states[static_cast<std::size_t>(node)] = State::Internal;
                // new_node() may reallocate, so create children before
                // taking a reference to this node
                const int left_id = new_node();
                const int right_id = new_node();
                auto& nd = tree.nodes[static_cast<std::size_t>(node)];
                nd.is_leaf = false;
                nd.pool_index = pi;
                nd.threshold = threshold;
                nd.left = left_id;
                nd.right = right_id;
            } else if (states[static_cast<std::size_t>(node)] == State::Leaf) {
                fail("path passes through a node already fixed as a leaf");
            } else {
                const auto& nd = tree.nodes[static_cast<std::size_t>(node)];
                if (nd.pool_index != pi || nd.threshold != threshold)
                    fail("condition '" + cond + "' contradicts an earlier rule");
            }
            node = is_left ? tree.nodes[static_cast<std::size_t>(node)].left
                           : tree.nodes[static_cast<std::size_t>(node)].right;
        }

        auto& st = states[static_cast<std::size_t>(node)];
        if (st == State::Internal) fail("leaf label lands on an internal node");
        if (st == State::Leaf && tree.nodes[static_cast<std::size_t>(node)].label != label)
            fail("conflicting labels for one path");
        st = State::Leaf;
        tree.nodes[static_cast<std::size_t>(node)].is_leaf = true;
        tree.nodes[static_cast<std::size_t>(node)].label = label;
    }
    if (!any_line) throw ConfigError("parse_rules: empty rule text");
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == State::Unset)
            throw ConfigError("parse_rules: rule set leaves a branch without a leaf");
    tree.depth = max_depth;
    return tree;
}

} // namespace ipl

#endif // IPL_WARNING_TREE_HPP
