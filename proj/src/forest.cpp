#include "trendforest/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace trendforest {

std::string to_string(Criterion c) { return c == Criterion::Gini ? "gini" : "entropy"; }
std::string to_string(SubspaceMode m) { return m == SubspaceMode::PerTree ? "tree" : "node"; }

std::optional<Criterion> criterion_from_string(std::string_view s) {
    if (s == "gini") return Criterion::Gini;
    if (s == "entropy") return Criterion::Entropy;
    return std::nullopt;
}

std::optional<SubspaceMode> subspace_from_string(std::string_view s) {
    if (s == "tree") return SubspaceMode::PerTree;
    if (s == "node") return SubspaceMode::PerNode;
    return std::nullopt;
}

namespace {

void check_distribution(std::span<const double> p) {
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0) throw NotADistribution("negative proportion");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw NotADistribution("proportions sum to " + std::to_string(sum));
}

// Gains this small are float residue of exact-count arithmetic, not signal.
constexpr double kMinGain = 1e-12;

}  // namespace

double gini(std::span<const double> proportions) {
    check_distribution(proportions);
    double sum_sq = 0.0;
    for (double p : proportions) sum_sq += p * p;
    return 1.0 - sum_sq;
}

double entropy(std::span<const double> proportions) {
    check_distribution(proportions);
    double h = 0.0;
    for (double p : proportions)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

double impurity(const ClassCounts& counts, Criterion criterion) {
    const double n = double(counts[0] + counts[1]);
    if (n == 0.0) return 0.0;
    const double p0 = counts[0] / n;
    const double p1 = counts[1] / n;
    if (criterion == Criterion::Gini) return 1.0 - (p0 * p0 + p1 * p1);
    double h = 0.0;
    if (p0 > 0.0) h -= p0 * std::log2(p0);
    if (p1 > 0.0) h -= p1 * std::log2(p1);
    return h;
}

double information_gain(const ClassCounts& parent, const ClassCounts& left,
                        const ClassCounts& right, Criterion criterion) {
    if (left[0] + right[0] != parent[0] || left[1] + right[1] != parent[1])
        throw CountMismatch{};
    const long nl = left[0] + left[1];
    const long nr = right[0] + right[1];
    if (nl == 0 || nr == 0) throw EmptyChild{};
    const double n = double(nl + nr);
    return impurity(parent, criterion) - (nl / n) * impurity(left, criterion) -
           (nr / n) * impurity(right, criterion);
}

std::optional<Split> best_split(const Eigen::Ref<const Eigen::MatrixXd>& features,
                                const Eigen::Ref<const Eigen::VectorXi>& labels,
                                std::span<const int> rows, std::span<const int> feature_subset,
                                Criterion criterion) {
    if (rows.size() < 2) return std::nullopt;

    ClassCounts parent{0, 0};
    for (int r : rows) ++parent[class_of(labels[r])];
    const double parent_impurity = impurity(parent, criterion);
    const double n = double(rows.size());

    std::vector<int> subset(feature_subset.begin(), feature_subset.end());
    std::sort(subset.begin(), subset.end());  // tie-break: lowest feature id wins

    std::optional<Split> best;
    std::vector<std::pair<double, int>> column(rows.size());
    for (int f : subset) {
        for (std::size_t i = 0; i < rows.size(); ++i)
            column[i] = {features(rows[i], f), labels[rows[i]]};
        std::sort(column.begin(), column.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        ClassCounts left{0, 0};
        for (std::size_t i = 0; i + 1 < column.size(); ++i) {
            ++left[class_of(column[i].second)];
            if (column[i].first == column[i + 1].first) continue;

            double threshold = 0.5 * (column[i].first + column[i + 1].first);
            if (!(threshold < column[i + 1].first)) threshold = column[i].first;

            const double nl = double(i + 1);
            const double nr = n - nl;
            const ClassCounts right{parent[0] - left[0], parent[1] - left[1]};
            const double gain = parent_impurity - (nl / n) * impurity(left, criterion) -
                                (nr / n) * impurity(right, criterion);
            if (!best || gain > best->gain) best = Split{f, threshold, gain};
        }
    }
    if (best && best->gain > kMinGain) return best;
    return std::nullopt;
}

int DecisionTree::leaf_for(const FeatureVector& x) const {
    int id = 0;
    while (!nodes[id].is_leaf())
        id = x[nodes[id].feature] <= nodes[id].threshold ? nodes[id].left : nodes[id].right;
    return id;
}

std::vector<int> bootstrap(int n, std::mt19937_64& rng) {
    std::vector<int> bag(static_cast<std::size_t>(n));
    for (auto& index : bag)
        index = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    return bag;
}

namespace {

// m distinct feature ids drawn by partial Fisher-Yates; ascending output.
std::vector<int> draw_features(int total, int m, std::mt19937_64& rng) {
    std::vector<int> pool(static_cast<std::size_t>(total));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < m; ++i) {
        const auto j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(total - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(m));
    std::sort(pool.begin(), pool.end());
    return pool;
}

struct TreeGrower {
    const Eigen::Ref<const Eigen::MatrixXd>& features;
    const Eigen::Ref<const Eigen::VectorXi>& labels;
    const GrowOptions& options;
    std::mt19937_64& rng;
    DecisionTree& tree;

    int build(std::vector<int>& rows, int depth) {
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        ClassCounts counts{0, 0};
        for (int r : rows) ++counts[class_of(labels[r])];
        tree.nodes[id].counts = counts;

        const bool pure = counts[0] == 0 || counts[1] == 0;
        const bool capped = options.depth_cap > 0 && depth >= options.depth_cap;
        std::optional<Split> split;
        if (!pure && !capped) {
            if (options.subspace == SubspaceMode::PerNode) {
                const auto node_subset = draw_features(kNumFeatures, options.mtry, rng);
                split = best_split(features, labels, rows, node_subset, options.criterion);
            } else {
                split = best_split(features, labels, rows, tree.feature_subset, options.criterion);
            }
        }
        if (!split) {
            tree.nodes[id].label = counts[1] >= counts[0] ? +1 : -1;  // majority, ties -> +1
            return id;
        }

        std::vector<int> left_rows, right_rows;
        left_rows.reserve(rows.size());
        right_rows.reserve(rows.size());
        for (int r : rows)
            (features(r, split->feature) <= split->threshold ? left_rows : right_rows)
                .push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        tree.nodes[id].feature = split->feature;
        tree.nodes[id].threshold = split->threshold;
        tree.nodes[id].left = build(left_rows, depth + 1);
        tree.nodes[id].right = build(right_rows, depth + 1);
        return id;
    }
};

}  // namespace

DecisionTree grow_tree(const Eigen::Ref<const Eigen::MatrixXd>& features,
                       const Eigen::Ref<const Eigen::VectorXi>& labels, std::vector<int> bag,
                       std::vector<int> feature_subset, std::mt19937_64& rng,
                       const GrowOptions& options) {
    DecisionTree tree;
    tree.feature_subset = std::move(feature_subset);
    tree.bag = std::move(bag);
    std::vector<int> rows = tree.bag;
    TreeGrower grower{features, labels, options, rng, tree};
    grower.build(rows, 0);
    return tree;
}

Forest train(const FeatureMatrix& matrix, const TrainOptions& options) {
    const int n = static_cast<int>(matrix.rows());
    if (options.mtry < 1 || options.mtry > kNumFeatures)
        throw BadMTry(options.mtry, kNumFeatures);
    if (options.trees < 1) throw Error("tree count must be >= 1");
    const bool has_rise = (matrix.labels.array() == 1).any();
    const bool has_fall = (matrix.labels.array() == -1).any();
    if (!has_rise || !has_fall) throw SingleClassData{};

    Forest forest;
    forest.criterion = options.criterion;
    forest.subspace = options.subspace;
    forest.seed = options.seed;
    forest.mtry = options.mtry;
    forest.depth_cap = options.depth_cap;
    forest.trees.resize(static_cast<std::size_t>(options.trees));

    GrowOptions grow_options{options.criterion, options.depth_cap, options.subspace,
                             options.mtry};
    auto grow_kth = [&](int k) {
        // Order-independent stream per tree: results do not depend on how
        // trees are scheduled across workers.
        std::mt19937_64 rng(options.seed ^ static_cast<std::uint64_t>(k));
        auto bag = bootstrap(n, rng);
        std::vector<int> subset;
        if (options.subspace == SubspaceMode::PerTree)
            subset = draw_features(kNumFeatures, options.mtry, rng);
        else
            subset.assign({0, 1, 2, 3, 4, 5});
        forest.trees[static_cast<std::size_t>(k)] = grow_tree(
            matrix.features, matrix.labels, std::move(bag), std::move(subset), rng, grow_options);
    };

    int workers = options.threads > 0 ? options.threads
                                      : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, options.trees);
    if (workers == 1) {
        for (int k = 0; k < options.trees; ++k) grow_kth(k);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int k = next.fetch_add(1); k < options.trees; k = next.fetch_add(1))
                    grow_kth(k);
            });
        for (auto& t : pool) t.join();
    }
    return forest;
}

Prediction predict(const Forest& forest, const FeatureVector& x) {
    long rise = 0;
    for (const auto& tree : forest.trees)
        if (tree.predict(x) > 0) ++rise;
    const long total = static_cast<long>(forest.trees.size());
    return {2 * rise >= total ? +1 : -1, double(rise) / double(total)};
}

namespace {

// Per-tree flags of which rows are in the bag.
std::vector<std::vector<char>> bag_membership(const Forest& forest, Eigen::Index n) {
    std::vector<std::vector<char>> in_bag(forest.trees.size(),
                                          std::vector<char>(static_cast<std::size_t>(n), 0));
    for (std::size_t t = 0; t < forest.trees.size(); ++t)
        for (int r : forest.trees[t].bag) in_bag[t][static_cast<std::size_t>(r)] = 1;
    return in_bag;
}

}  // namespace

OobResult oob_error(const Forest& forest, const FeatureMatrix& matrix) {
    const auto n = matrix.rows();
    const auto in_bag = bag_membership(forest, n);

    long covered = 0, wrong = 0, uncovered = 0;
    FeatureVector x;
    for (Eigen::Index i = 0; i < n; ++i) {
        x = matrix.features.row(i);
        long rise = 0, votes = 0;
        for (std::size_t t = 0; t < forest.trees.size(); ++t) {
            if (in_bag[t][static_cast<std::size_t>(i)]) continue;
            ++votes;
            if (forest.trees[t].predict(x) > 0) ++rise;
        }
        if (votes == 0) {
            ++uncovered;
            continue;
        }
        ++covered;
        const int voted = 2 * rise >= votes ? +1 : -1;
        if (voted != matrix.labels[i]) ++wrong;
    }
    if (covered == 0) throw NoOobRows{};
    return {double(wrong) / double(covered), uncovered};
}

std::vector<std::pair<int, double>> oob_curve(const FeatureMatrix& matrix,
                                              std::span<const int> b_values,
                                              const TrainOptions& options) {
    if (b_values.empty()) throw Error("oob_curve needs at least one tree count");
    for (std::size_t i = 0; i < b_values.size(); ++i) {
        if (b_values[i] < 1) throw Error("oob_curve tree counts must be >= 1");
        if (i > 0 && b_values[i] <= b_values[i - 1])
            throw Error("oob_curve tree counts must be ascending");
    }

    TrainOptions full = options;
    full.trees = b_values.back();
    const Forest forest = train(matrix, full);
    const auto n = matrix.rows();
    const auto in_bag = bag_membership(forest, n);

    // Cache each tree's vote for each row once; prefix sums give every b.
    std::vector<long> rise(static_cast<std::size_t>(n), 0);
    std::vector<long> votes(static_cast<std::size_t>(n), 0);
    std::vector<std::pair<int, double>> curve;
    std::size_t next_b = 0;
    FeatureVector x;
    for (int t = 0; t < full.trees; ++t) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (in_bag[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)]) continue;
            x = matrix.features.row(i);
            ++votes[static_cast<std::size_t>(i)];
            if (forest.trees[static_cast<std::size_t>(t)].predict(x) > 0)
                ++rise[static_cast<std::size_t>(i)];
        }
        if (next_b < b_values.size() && t + 1 == b_values[next_b]) {
            long covered = 0, wrong = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto v = votes[static_cast<std::size_t>(i)];
                if (v == 0) continue;
                ++covered;
                const int voted = 2 * rise[static_cast<std::size_t>(i)] >= v ? +1 : -1;
                if (voted != matrix.labels[i]) ++wrong;
            }
            if (covered == 0) throw NoOobRows{};
            curve.emplace_back(b_values[next_b], double(wrong) / double(covered));
            ++next_b;
        }
    }
    return curve;
}

}  // namespace trendforest
