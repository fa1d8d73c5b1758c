#include "trendforest/separability.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "trendforest/text.hpp"

namespace trendforest {

Standardized standardize(const Eigen::Ref<const Eigen::MatrixXd>& rows) {
    const auto n = rows.rows();
    if (n < 2) throw TooFewRows("standardize needs at least 2 rows");

    Standardized out;
    out.mean = rows.colwise().mean();
    Eigen::MatrixXd centered = rows.rowwise() - out.mean;
    out.stddev = (centered.array().square().colwise().sum() / double(n)).sqrt();

    out.rows = centered;
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
        // Identical values can leave a ~1e-17 residue through the mean.
        const double tol = 1e-12 * std::max(1.0, std::abs(out.mean[c]));
        if (out.stddev[c] <= tol) {
            out.stddev[c] = 0.0;
            out.rows.col(c).setZero();
            out.constant_columns.push_back(static_cast<int>(c));
        } else {
            out.rows.col(c) /= out.stddev[c];
        }
    }
    return out;
}

Projection2D pca_2d(const Eigen::Ref<const Eigen::MatrixXd>& rows) {
    const auto n = rows.rows();
    const auto d = rows.cols();
    if (n < 3) throw TooFewRows("pca_2d needs at least 3 rows");

    Eigen::MatrixXd centered = rows.rowwise() - rows.colwise().mean();
    Eigen::MatrixXd covariance = centered.transpose() * centered / double(n);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
    Projection2D out;
    out.components.resize(d, 2);
    // Eigen reports eigenvalues ascending; take the top two, descending.
    for (int k = 0; k < 2; ++k) {
        Eigen::VectorXd component = solver.eigenvectors().col(d - 1 - k);
        Eigen::Index peak = 0;
        component.cwiseAbs().maxCoeff(&peak);
        if (component[peak] < 0) component = -component;
        out.components.col(k) = component;
        out.explained_variance[k] = std::max(solver.eigenvalues()[d - 1 - k], 0.0);
    }
    out.points = centered * out.components;
    return out;
}

namespace {

double cross(const Eigen::Vector2d& origin, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - origin.x()) * (b.y() - origin.y()) -
           (a.y() - origin.y()) * (b.x() - origin.x());
}

bool lex_less(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
}

// Closed segment-segment intersection (shared endpoints and collinear
// overlap count).
bool segments_intersect(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                        const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
    auto orient = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                     const Eigen::Vector2d& c) {
        const double v = cross(a, b, c);
        return v > 0 ? 1 : v < 0 ? -1 : 0;
    };
    auto on_segment = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                         const Eigen::Vector2d& p) {
        return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
               std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
    };
    const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

}  // namespace

ConvexHull2D convex_hull(const std::vector<Eigen::Vector2d>& points) {
    if (points.empty()) throw TooFewRows("convex_hull needs at least 1 point");

    std::vector<Eigen::Vector2d> pts = points;
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) { return a == b; }),
              pts.end());

    ConvexHull2D hull;
    if (pts.size() <= 2) {
        hull.vertices = pts;
        return hull;
    }

    std::vector<Eigen::Vector2d> chain(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {  // lower hull
        while (k >= 2 && cross(chain[k - 2], chain[k - 1], p) <= 0) --k;
        chain[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {  // upper hull
        while (k >= lower && cross(chain[k - 2], chain[k - 1], *it) <= 0) --k;
        chain[k++] = *it;
    }
    chain.resize(k - 1);  // last point repeats the first
    if (chain.size() == 2 && chain[0] == chain[1]) chain.pop_back();
    hull.vertices = std::move(chain);
    return hull;
}

double hull_area(const ConvexHull2D& hull) {
    const auto& v = hull.vertices;
    if (v.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        twice += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * twice;
}

bool hull_contains(const ConvexHull2D& hull, const Eigen::Vector2d& point) {
    const auto& v = hull.vertices;
    if (v.empty()) return false;
    if (v.size() == 1) return v[0] == point;
    if (v.size() == 2) {
        if (cross(v[0], v[1], point) != 0.0) return false;
        return std::min(v[0].x(), v[1].x()) <= point.x() &&
               point.x() <= std::max(v[0].x(), v[1].x()) &&
               std::min(v[0].y(), v[1].y()) <= point.y() &&
               point.y() <= std::max(v[0].y(), v[1].y());
    }
    for (std::size_t i = 0; i < v.size(); ++i)
        if (cross(v[i], v[(i + 1) % v.size()], point) < 0) return false;  // CCW order
    return true;
}

bool hulls_intersect(const ConvexHull2D& a, const ConvexHull2D& b) {
    const auto& va = a.vertices;
    const auto& vb = b.vertices;
    if (va.empty() || vb.empty()) return false;

    // Vertex containment covers nesting and the point-hull cases.
    for (const auto& p : va)
        if (hull_contains(b, p)) return true;
    for (const auto& p : vb)
        if (hull_contains(a, p)) return true;

    // Edge crossings cover partial overlap (closed-segment semantics).
    if (va.size() >= 2 && vb.size() >= 2) {
        for (std::size_t i = 0; i < va.size(); ++i) {
            const auto& p1 = va[i];
            const auto& p2 = va[(i + 1) % va.size()];
            for (std::size_t j = 0; j < vb.size(); ++j) {
                const auto& q1 = vb[j];
                const auto& q2 = vb[(j + 1) % vb.size()];
                if (segments_intersect(p1, p2, q1, q2)) return true;
            }
        }
    }
    return false;
}

SeparabilityReport separability_report(const FeatureMatrix& matrix) {
    const bool has_rise = (matrix.labels.array() == 1).any();
    const bool has_fall = (matrix.labels.array() == -1).any();
    if (!has_rise || !has_fall) throw SingleClassData{};

    SeparabilityReport report;
    auto standardized = standardize(matrix.features);
    report.constant_columns = std::move(standardized.constant_columns);
    report.projection = pca_2d(standardized.rows);
    report.labels = matrix.labels;

    std::vector<Eigen::Vector2d> rise, fall;
    for (Eigen::Index i = 0; i < matrix.labels.size(); ++i) {
        Eigen::Vector2d p = report.projection.points.row(i);
        (matrix.labels[i] == 1 ? rise : fall).push_back(p);
    }
    report.hull_rise = convex_hull(rise);
    report.hull_fall = convex_hull(fall);
    report.separable = !hulls_intersect(report.hull_rise, report.hull_fall);
    return report;
}

std::string points_csv(const SeparabilityReport& report) {
    std::string out = "x,y,label\n";
    for (Eigen::Index i = 0; i < report.labels.size(); ++i) {
        out += format_double(report.projection.points(i, 0));
        out += ',';
        out += format_double(report.projection.points(i, 1));
        out += ',';
        out += std::to_string(report.labels[i]);
        out += '\n';
    }
    return out;
}

std::string hulls_csv(const SeparabilityReport& report) {
    std::string out = "class,x,y,order\n";
    auto emit = [&](int label, const ConvexHull2D& hull) {
        for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
            out += std::to_string(label);
            out += ',';
            out += format_double(hull.vertices[i].x());
            out += ',';
            out += format_double(hull.vertices[i].y());
            out += ',';
            out += std::to_string(i);
            out += '\n';
        }
    };
    emit(1, report.hull_rise);
    emit(-1, report.hull_fall);
    return out;
}

}  // namespace trendforest
