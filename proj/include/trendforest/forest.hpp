#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "trendforest/indicators.hpp"

namespace trendforest {

enum class Criterion { Gini, Entropy };

/// When the random feature subspace is drawn: once per tree (the default) or
/// fresh at every node (Breiman's canonical variant).
enum class SubspaceMode { PerTree, PerNode };

std::string to_string(Criterion c);
std::string to_string(SubspaceMode m);
std::optional<Criterion> criterion_from_string(std::string_view s);
std::optional<SubspaceMode> subspace_from_string(std::string_view s);

/// Gini impurity 1 - sum p_i^2 (equals the pairwise sum over i != j).
/// Throws NotADistribution unless p is non-negative and sums to 1 (1e-9).
double gini(std::span<const double> proportions);

/// Shannon entropy -sum p_i log2 p_i with 0*log 0 = 0.
double entropy(std::span<const double> proportions);

/// Class counts, index 0 = label -1 (fall), index 1 = label +1 (rise).
using ClassCounts = std::array<long, 2>;

inline int class_of(int label) { return label > 0 ? 1 : 0; }

/// Impurity of a counted population under the chosen criterion.
double impurity(const ClassCounts& counts, Criterion criterion);

/// Impurity reduction I(N) - P_L*I(N_L) - P_R*I(N_R).
/// Throws EmptyChild / CountMismatch.
double information_gain(const ClassCounts& parent, const ClassCounts& left,
                        const ClassCounts& right, Criterion criterion);

struct Split {
    int feature;
    double threshold;
    double gain;
};

/// Exhaustive scan over the feature subset; candidate thresholds are
/// midpoints of consecutive distinct sorted values. Ties break toward the
/// lower feature id, then the lower threshold. Empty result when no split
/// has positive gain. The split test is `value <= threshold` -> left.
std::optional<Split> best_split(const Eigen::Ref<const Eigen::MatrixXd>& features,
                                const Eigen::Ref<const Eigen::VectorXi>& labels,
                                std::span<const int> rows, std::span<const int> feature_subset,
                                Criterion criterion);

/// Binary split node. feature < 0 marks a leaf.
struct DecisionNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;              // +1/-1, leaves only
    ClassCounts counts{0, 0};   // population reaching the node

    bool is_leaf() const { return feature < 0; }
};

struct GrowOptions {
    Criterion criterion = Criterion::Gini;
    int depth_cap = 0;  // 0 = grow to purity
    SubspaceMode subspace = SubspaceMode::PerTree;
    int mtry = kNumFeatures;  // per-node draws (PerNode mode only)
};

/// One classification tree plus the randomness that built it. Nodes are
/// stored in preorder, so node ids match the DOT export and trace output.
struct DecisionTree {
    std::vector<DecisionNode> nodes;
    std::vector<int> feature_subset;  // ids eligible for split search
    std::vector<int> bag;             // bootstrap row multiset, |bag| = n

    int predict(const FeatureVector& x) const { return nodes[leaf_for(x)].label; }
    int leaf_for(const FeatureVector& x) const;
};

/// n uniform draws with replacement from [0, n); deterministic in the stream.
std::vector<int> bootstrap(int n, std::mt19937_64& rng);

/// Recursive greedy growth; a node becomes a leaf when pure, when no
/// positive-gain split exists, or at the depth cap. Forced mixed leaves take
/// the majority label, ties toward +1.
DecisionTree grow_tree(const Eigen::Ref<const Eigen::MatrixXd>& features,
                       const Eigen::Ref<const Eigen::VectorXi>& labels, std::vector<int> bag,
                       std::vector<int> feature_subset, std::mt19937_64& rng,
                       const GrowOptions& options);

struct TrainOptions {
    int trees = 65;
    int mtry = 3;
    Criterion criterion = Criterion::Gini;
    SubspaceMode subspace = SubspaceMode::PerTree;
    int depth_cap = 0;      // 0 = none
    std::uint64_t seed = 42;
    int threads = 0;        // 0 = hardware concurrency
};

struct Forest {
    std::vector<DecisionTree> trees;
    Criterion criterion = Criterion::Gini;
    SubspaceMode subspace = SubspaceMode::PerTree;
    std::uint64_t seed = 42;
    int mtry = 3;
    int depth_cap = 0;

    int tree_count() const { return static_cast<int>(trees.size()); }
};

/// Bagging + random subspaces. Tree k owns the stream mt19937_64(seed ^ k),
/// so results are bit-identical for any worker count or tree order.
/// Throws SingleClassData / BadMTry.
Forest train(const FeatureMatrix& matrix, const TrainOptions& options);

struct Prediction {
    int label;             // majority vote, ties -> +1
    double vote_fraction;  // share of trees voting +1 (the ROC score)
};

Prediction predict(const Forest& forest, const FeatureVector& x);

struct OobResult {
    double error;        // misclassified fraction over covered rows
    long uncovered_rows; // rows in every bag, hence without OOB votes
};

/// Out-of-bag error: each row is voted on only by trees whose bag excludes
/// it (majority, ties -> +1). Throws NoOobRows when no row is covered.
OobResult oob_error(const Forest& forest, const FeatureMatrix& matrix);

/// OOB error at each requested ensemble size, sharing one incrementally
/// trained tree list (the b-tree forest is a prefix of the largest one).
std::vector<std::pair<int, double>> oob_curve(const FeatureMatrix& matrix,
                                              std::span<const int> b_values,
                                              const TrainOptions& options);

/// Versioned text serialization; round-trips exactly.
std::string serialize(const Forest& forest);
Forest forest_from_text(std::istream& input);
void save_forest(const Forest& forest, const std::filesystem::path& path);
Forest load_forest(const std::filesystem::path& path);

}  // namespace trendforest
