#pragma once

#include <string>
#include <vector>

#include "trendforest/forest.hpp"

namespace trendforest {

/// Graph-description-language rendering of one tree. Internal nodes read
/// `feature <= threshold` (4 decimal places), leaves read Rise/Fall, edges
/// carry True (left) / False (right). Node ids are the stable preorder ids.
std::string export_dot(const DecisionTree& tree, int tree_id);

/// One threshold comparison recorded while routing a sample.
struct TraceStep {
    int tree_id;
    int node_id;
    int feature;
    double feature_value;
    double threshold;
    bool branch_left;  // feature_value <= threshold

    int next_node(const DecisionTree& tree) const {
        return branch_left ? tree.nodes[node_id].left : tree.nodes[node_id].right;
    }
};

struct TreeTrace {
    int tree_id;
    std::vector<TraceStep> steps;
    int leaf_node;
    int leaf_label;
};

struct TraceResult {
    std::vector<TreeTrace> trees;
    long rise_votes = 0;
    long fall_votes = 0;
    int ensemble_label = 0;  // majority, ties -> +1
};

/// Replays predict() while recording every comparison.
TraceResult trace(const Forest& forest, const FeatureVector& x);

/// Text rendering: per tree `At node N:(Feature=value) <= threshold?` lines
/// with `True/False: Go to Node M`, a leaf line, and the ensemble summary.
std::string render_trace(const TraceResult& result);

}  // namespace trendforest
