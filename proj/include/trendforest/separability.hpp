#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "trendforest/indicators.hpp"

namespace trendforest {

/// Column-wise z-scores. Deviation uses the divide-by-n form so that a
/// two-row column {0,2} standardizes to exactly {-1,+1}. Constant columns map
/// to all-zeros and are reported rather than raised in pipeline use.
struct Standardized {
    Eigen::MatrixXd rows;
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd stddev;          // 0 marks a constant column
    std::vector<int> constant_columns;  // column ids mapped to zeros
};

/// Throws TooFewRows below 2 rows.
Standardized standardize(const Eigen::Ref<const Eigen::MatrixXd>& rows);

/// Top-2 principal directions of the (divide-by-n) covariance.
/// Sign convention: the largest-magnitude coordinate of each component is
/// positive, so results are deterministic.
struct Projection2D {
    Eigen::MatrixX2d points;             // n x 2 projected coordinates
    Eigen::MatrixXd components;          // d x 2, orthonormal columns
    Eigen::Vector2d explained_variance;  // matching eigenvalues, descending
};

/// Throws TooFewRows below 3 rows.
Projection2D pca_2d(const Eigen::Ref<const Eigen::MatrixXd>& rows);

/// Convex polygon, vertices counter-clockwise, collinear boundary points
/// excluded. 1- and 2-vertex hulls represent points and segments.
struct ConvexHull2D {
    std::vector<Eigen::Vector2d> vertices;
};

/// Monotone-chain hull; requires at least one point.
ConvexHull2D convex_hull(const std::vector<Eigen::Vector2d>& points);

/// Shoelace area (0 for degenerate hulls).
double hull_area(const ConvexHull2D& hull);

/// True if the point lies inside or on the hull (closed semantics).
bool hull_contains(const ConvexHull2D& hull, const Eigen::Vector2d& point);

/// Closed-set intersection test: boundary contact counts as intersecting.
/// Handles point/segment degenerate hulls.
bool hulls_intersect(const ConvexHull2D& a, const ConvexHull2D& b);

/// The linear-separability check: standardize, project to 2-D by PCA, build
/// per-class hulls, call the classes separable when the hulls are disjoint.
struct SeparabilityReport {
    bool separable = false;
    Projection2D projection;
    Eigen::VectorXi labels;  // per projected point
    ConvexHull2D hull_rise;  // label +1
    ConvexHull2D hull_fall;  // label -1
    std::vector<int> constant_columns;
};

/// Throws SingleClassData when only one label is present.
SeparabilityReport separability_report(const FeatureMatrix& matrix);

/// Plot-ready CSVs: projected points (`x,y,label`) and hull vertices
/// (`class,x,y,order`).
std::string points_csv(const SeparabilityReport& report);
std::string hulls_csv(const SeparabilityReport& report);

}  // namespace trendforest
