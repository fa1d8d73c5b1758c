#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include "trendforest/forest.hpp"
#include "trendforest/text.hpp"

namespace trendforest {

namespace {

constexpr std::string_view kMagic = "trendforest-forest v1";

struct LineReader {
    std::istream& input;
    int line_no = 0;
    std::string line;

    std::string_view next() {
        if (!std::getline(input, line)) throw MalformedRow(line_no + 1, "unexpected end of model");
        ++line_no;
        return trim(line);
    }
};

[[noreturn]] void fail(const LineReader& reader, const std::string& detail) {
    throw MalformedRow(reader.line_no, "model: " + detail);
}

long expect_int(LineReader& reader, std::string_view token, const std::string& what) {
    auto v = parse_int(token);
    if (!v) fail(reader, "bad " + what + " '" + std::string(token) + "'");
    return static_cast<long>(*v);
}

}  // namespace

std::string serialize(const Forest& forest) {
    std::string out(kMagic);
    out += '\n';
    out += "criterion " + to_string(forest.criterion) + '\n';
    out += "subspace " + to_string(forest.subspace) + '\n';
    out += "seed " + std::to_string(forest.seed) + '\n';
    out += "mtry " + std::to_string(forest.mtry) + '\n';
    out += "depth_cap " + std::to_string(forest.depth_cap) + '\n';
    out += "features";
    for (const auto& name : kFeatureNames) out += ' ' + name;
    out += '\n';
    out += "trees " + std::to_string(forest.trees.size()) + '\n';

    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        const auto& tree = forest.trees[t];
        out += "tree " + std::to_string(t) + '\n';
        out += "subset";
        for (int f : tree.feature_subset) out += ' ' + std::to_string(f);
        out += '\n';
        out += "bag " + std::to_string(tree.bag.size());
        for (int r : tree.bag) out += ' ' + std::to_string(r);
        out += '\n';
        out += "nodes " + std::to_string(tree.nodes.size()) + '\n';
        for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
            const auto& node = tree.nodes[id];
            if (node.is_leaf()) {
                out += "l " + std::to_string(id) + ' ' + std::to_string(node.label) + ' ' +
                       std::to_string(node.counts[0]) + ' ' + std::to_string(node.counts[1]) +
                       '\n';
            } else {
                out += "n " + std::to_string(id) + ' ' + std::to_string(node.feature) + ' ' +
                       format_double(node.threshold) + ' ' + std::to_string(node.left) + ' ' +
                       std::to_string(node.right) + '\n';
            }
        }
    }
    out += "end\n";
    return out;
}

Forest forest_from_text(std::istream& input) {
    LineReader reader{input};
    if (reader.next() != kMagic) fail(reader, "bad magic line (expected '" + std::string(kMagic) + "')");

    Forest forest;
    auto keyed = [&](std::string_view key) {
        auto fields = split(reader.next(), ' ');
        if (fields.empty() || fields[0] != key)
            fail(reader, "expected '" + std::string(key) + "' line");
        return fields;
    };

    {
        auto f = keyed("criterion");
        auto c = f.size() == 2 ? criterion_from_string(f[1]) : std::nullopt;
        if (!c) fail(reader, "bad criterion");
        forest.criterion = *c;
    }
    {
        auto f = keyed("subspace");
        auto m = f.size() == 2 ? subspace_from_string(f[1]) : std::nullopt;
        if (!m) fail(reader, "bad subspace");
        forest.subspace = *m;
    }
    {
        auto f = keyed("seed");
        if (f.size() != 2) fail(reader, "bad seed");
        std::uint64_t seed = 0;
        auto res = std::from_chars(f[1].data(), f[1].data() + f[1].size(), seed);
        if (res.ec != std::errc{} || res.ptr != f[1].data() + f[1].size())
            fail(reader, "bad seed");
        forest.seed = seed;
    }
    {
        auto f = keyed("mtry");
        if (f.size() != 2) fail(reader, "bad mtry");
        forest.mtry = static_cast<int>(expect_int(reader, f[1], "mtry"));
    }
    {
        auto f = keyed("depth_cap");
        if (f.size() != 2) fail(reader, "bad depth_cap");
        forest.depth_cap = static_cast<int>(expect_int(reader, f[1], "depth_cap"));
    }
    {
        auto f = keyed("features");
        if (f.size() != 1 + kFeatureNames.size()) fail(reader, "bad feature list");
        for (std::size_t i = 0; i < kFeatureNames.size(); ++i)
            if (f[i + 1] != kFeatureNames[i]) fail(reader, "unknown feature order");
    }

    long tree_count = 0;
    {
        auto f = keyed("trees");
        if (f.size() != 2) fail(reader, "bad tree count");
        tree_count = expect_int(reader, f[1], "tree count");
        if (tree_count < 1) fail(reader, "tree count must be >= 1");
    }

    forest.trees.resize(static_cast<std::size_t>(tree_count));
    for (long t = 0; t < tree_count; ++t) {
        auto& tree = forest.trees[static_cast<std::size_t>(t)];
        {
            auto f = keyed("tree");
            if (f.size() != 2 || expect_int(reader, f[1], "tree id") != t)
                fail(reader, "tree ids must be sequential");
        }
        {
            auto f = keyed("subset");
            for (std::size_t i = 1; i < f.size(); ++i) {
                const auto id = expect_int(reader, f[i], "feature id");
                if (id < 0 || id >= kNumFeatures) fail(reader, "feature id out of range");
                tree.feature_subset.push_back(static_cast<int>(id));
            }
            if (tree.feature_subset.empty()) fail(reader, "empty feature subset");
        }
        {
            auto f = keyed("bag");
            if (f.size() < 2) fail(reader, "bad bag line");
            const auto count = expect_int(reader, f[1], "bag size");
            if (count + 2 != static_cast<long>(f.size())) fail(reader, "bag size mismatch");
            tree.bag.reserve(static_cast<std::size_t>(count));
            for (std::size_t i = 2; i < f.size(); ++i)
                tree.bag.push_back(static_cast<int>(expect_int(reader, f[i], "bag index")));
        }
        long node_count = 0;
        {
            auto f = keyed("nodes");
            if (f.size() != 2) fail(reader, "bad node count");
            node_count = expect_int(reader, f[1], "node count");
            if (node_count < 1) fail(reader, "node count must be >= 1");
        }
        tree.nodes.resize(static_cast<std::size_t>(node_count));
        for (long id = 0; id < node_count; ++id) {
            auto f = split(reader.next(), ' ');
            if (f.size() < 2 || expect_int(reader, f[1], "node id") != id)
                fail(reader, "node ids must be preorder-sequential");
            auto& node = tree.nodes[static_cast<std::size_t>(id)];
            if (f[0] == "l") {
                if (f.size() != 5) fail(reader, "leaf line needs 5 fields");
                const auto label = expect_int(reader, f[2], "leaf label");
                if (label != 1 && label != -1) fail(reader, "leaf label must be +1/-1");
                node.label = static_cast<int>(label);
                node.counts[0] = expect_int(reader, f[3], "fall count");
                node.counts[1] = expect_int(reader, f[4], "rise count");
                if (node.counts[0] < 0 || node.counts[1] < 0 ||
                    node.counts[0] + node.counts[1] == 0)
                    fail(reader, "leaf population must be nonzero");
            } else if (f[0] == "n") {
                if (f.size() != 6) fail(reader, "internal line needs 6 fields");
                const auto feature = expect_int(reader, f[2], "feature id");
                if (std::find(tree.feature_subset.begin(), tree.feature_subset.end(),
                              static_cast<int>(feature)) == tree.feature_subset.end())
                    fail(reader, "split feature outside the tree's subset");
                auto threshold = parse_double(f[3]);
                if (!threshold) fail(reader, "bad threshold");
                node.feature = static_cast<int>(feature);
                node.threshold = *threshold;
                node.left = static_cast<int>(expect_int(reader, f[4], "left child"));
                node.right = static_cast<int>(expect_int(reader, f[5], "right child"));
                if (node.left <= id || node.left >= node_count || node.right <= id ||
                    node.right >= node_count)
                    fail(reader, "child id out of range");
            } else {
                fail(reader, "node line must start with 'n' or 'l'");
            }
        }
    }
    if (reader.next() != "end") fail(reader, "missing end marker");
    return forest;
}

void save_forest(const Forest& forest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open model file for writing: " + path.string());
    out << serialize(forest);
    if (!out) throw Error("failed writing model file: " + path.string());
}

Forest load_forest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file: " + path.string());
    return forest_from_text(in);
}

}  // namespace trendforest
